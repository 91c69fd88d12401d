"""Exception hierarchy shared by all modules.

`InputError` covers anything a user can fix by changing the input; the CLI
maps it to exit code 2. `InconsistencyError` means two computations that
must agree did not, which points at a bug; the CLI maps it to exit code 3.
"""


class InputError(ValueError):
    def __init__(self, kind: str, detail: str = ""):
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind}: {detail}" if detail else kind)


class DiagramError(InputError):
    pass


class SymmetricUnionError(InputError):
    pass


class BandError(InputError):
    pass


class TangleError(InputError):
    pass


class InconsistencyError(RuntimeError):
    pass
