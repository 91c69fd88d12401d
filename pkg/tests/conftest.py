import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

TREFOIL_PD = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
FIGURE_EIGHT_PD = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"
TREFOIL_HALF_SU = "half: X(E1,4,2,5) X(3,6,4,E2) X(5,2,6,3) ; axis:"
EMPTY_SU = "half: A(E1,E2) ; axis:"

# criterion number -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
