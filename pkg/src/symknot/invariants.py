"""Exact invariants of knot diagrams and the bounds built on them."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

from . import linalg
from .diagram import KnotDiagram, faces, require_valid
from .errors import InconsistencyError


@dataclass(frozen=True)
class LaurentPolynomial:
    """Integer Laurent polynomial in t, stored sparse as ((exponent, coeff), ...)."""

    terms: tuple[tuple[int, int], ...]

    @classmethod
    def from_coefficients(cls, coeffs, low: int = 0) -> "LaurentPolynomial":
        return cls(tuple((low + i, c) for i, c in enumerate(coeffs) if c))

    @classmethod
    def from_dict(cls, mapping: dict[int, int]) -> "LaurentPolynomial":
        return cls(tuple(sorted((e, c) for e, c in mapping.items() if c)))

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def span(self) -> int:
        if not self.terms:
            return 0
        return self.terms[-1][0] - self.terms[0][0]

    def normalized(self) -> "LaurentPolynomial":
        """Shift so the lowest exponent is 0 and flip so the top coefficient is positive."""
        if not self.terms:
            return self
        low = self.terms[0][0]
        sign = 1 if self.terms[-1][1] > 0 else -1
        return LaurentPolynomial(tuple((e - low, sign * c) for e, c in self.terms))

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        out: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial.from_dict(out)

    def __call__(self, t: int) -> int:
        if any(e < 0 for e, _ in self.terms) and abs(t) != 1:
            raise ValueError("negative exponents need t = +-1")
        return sum(c * (t ** e if e >= 0 else t ** -e) for e, c in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = "t" if e == 1 else f"t^{e}"
                body = power if mag == 1 else f"{mag}*{power}"
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text


ONE = LaurentPolynomial(((0, 1),))


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group by invariant factors; 0 marks a Z summand."""

    invariant_factors: tuple[int, ...]

    @property
    def min_generators(self) -> int:
        return len(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return 0 not in self.invariant_factors

    @property
    def order(self) -> int | None:
        return prod(self.invariant_factors) if self.is_finite else None

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class BoundsReport:
    singularity_count: int
    heegaard_upper: int
    heegaard_lower: int
    rs_lower: int
    free_genus_upper: int
    genus_lower: int
    determinant: int
    h1_factors: tuple[int, ...]
    flags: tuple[str, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.flags


def alexander_polynomial(d: KnotDiagram) -> LaurentPolynomial:
    """Normalized det(V - t V^T) for a Seifert matrix V of the diagram."""
    from .seifert import seifert_matrix

    v = seifert_matrix(d)
    vt = linalg.transpose(v)
    coeffs = linalg.poly_det(v, [[-x for x in row] for row in vt])
    poly = LaurentPolynomial.from_coefficients(coeffs).normalized()
    if abs(poly(1)) != 1:
        raise InconsistencyError(f"Alexander polynomial {poly} has |value at 1| != 1")
    return poly


def checkerboard(d: KnotDiagram) -> tuple[list[list[tuple[int, int]]], list[int], int]:
    """Faces, their colours (0 white, 1 black) and the white seed face.

    The face on the left of the lowest-labelled arc stands in for the
    unbounded region and is coloured white; every other colour follows
    because faces across an edge differ.
    """
    fs = faces(d)
    face_of = {he: k for k, f in enumerate(fs) for he in f}
    st = d._structure
    seed = face_of[st.occurrences[min(st.occurrences)][0]]
    colour = [-1] * len(fs)
    colour[seed] = 0
    stack = [seed]
    while stack:
        k = stack.pop()
        for ci, s in fs[k]:
            other = face_of[st.other_end(ci, s)]
            if colour[other] == -1:
                colour[other] = 1 - colour[k]
                stack.append(other)
            elif colour[other] == colour[k]:
                raise InconsistencyError("checkerboard colouring failed")
    return fs, colour, seed


def goeritz_matrix(d: KnotDiagram) -> list[list[int]]:
    """Goeritz matrix on the white regions, seed region deleted."""
    require_valid(d)
    if not d.crossings:
        return []
    fs, colour, seed = checkerboard(d)
    face_of = {he: k for k, f in enumerate(fs) for he in f}
    white = [k for k, c in enumerate(colour) if c == 0]
    index = {k: i for i, k in enumerate(white)}
    n = len(white)
    g = [[0] * n for _ in range(n)]
    for ci in range(len(d.crossings)):
        # quadrant q lies between slots q and q+1 (counterclockwise)
        quad = [face_of[(ci, q)] for q in range(4)]
        if colour[quad[0]] == 0:
            eta, a, b = 1, quad[0], quad[2]
        else:
            eta, a, b = -1, quad[1], quad[3]
        if a == b:
            continue
        i, j = index[a], index[b]
        g[i][j] -= eta
        g[j][i] -= eta
    for i in range(n):
        g[i][i] = -sum(g[i][j] for j in range(n) if j != i)
    drop = index[seed]
    return [[g[i][j] for j in range(n) if j != drop] for i in range(n) if i != drop]


def smith_normal_form(m) -> AbelianGroup:
    """Cokernel of m (rows are relations, columns generators)."""
    rows = [list(r) for r in m]
    ncols = len(rows[0]) if rows else 0
    diag = linalg.smith_diagonal(rows) if rows and ncols else []
    factors = [x for x in diag if x != 1]
    factors += [0] * (ncols - len(diag))
    finite = sorted(x for x in factors if x)
    return AbelianGroup(tuple(finite + [0] * factors.count(0)))


def h1_double_cover(d: KnotDiagram) -> AbelianGroup:
    return smith_normal_form(goeritz_matrix(d))


def determinant(d: KnotDiagram) -> int:
    """|Delta(-1)|, cross-checked against the Goeritz matrix."""
    value = abs(alexander_polynomial(d)(-1))
    goeritz = abs(linalg.bareiss_det(goeritz_matrix(d)))
    if value != goeritz:
        raise InconsistencyError(f"determinant mismatch: Alexander {value}, Goeritz {goeritz}")
    if value % 2 == 0:
        raise InconsistencyError(f"even determinant {value} for a knot")
    return value


def rs_lower_bound(heegaard_lower: int) -> int:
    """Smallest r with 4r - 1 >= heegaard_lower; 0 when there is nothing to bound."""
    if heegaard_lower == 0:
        return 0
    return -(-(heegaard_lower + 1) // 4)


def bounds_report(d: KnotDiagram, r: int) -> BoundsReport:
    if r < 0:
        raise ValueError("singularity count must be non-negative")
    group = h1_double_cover(d)
    det = determinant(d)
    if group.order != det:
        raise InconsistencyError(f"|H1| = {group.order} but determinant is {det}")
    h_lower = group.min_generators
    rs_lower = rs_lower_bound(h_lower)
    genus_lower = alexander_polynomial(d).span // 2
    flags = []
    if rs_lower > r:
        flags.append(f"rs_lower {rs_lower} exceeds singularity count {r}")
    if genus_lower > r:
        flags.append(f"genus lower bound {genus_lower} exceeds free genus upper bound {r}")
    if h_lower > 3 * r:
        flags.append(f"H1 rank {h_lower} exceeds Heegaard upper bound {3 * r}")
    return BoundsReport(
        singularity_count=r,
        heegaard_upper=3 * r,
        heegaard_lower=h_lower,
        rs_lower=rs_lower,
        free_genus_upper=r,
        genus_lower=genus_lower,
        determinant=det,
        h1_factors=group.invariant_factors,
        flags=tuple(flags),
    )
