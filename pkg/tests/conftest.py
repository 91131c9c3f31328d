from fractions import Fraction

import pytest

from sepchoice.exact_linalg import fmat
from sepchoice.scenarios import fs_space
from sepchoice.separability import JointChoiceRule

F = Fraction

# Printed type matrix of one DM in the two-menu experiment and its facets.
A_FS = fmat([[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 0, 0], [0, 0, 1, 1]])
H_FS = fmat([[-1, -1, 1, 1], [1, 1, -1, -1], [1, 0, 0, 0], [0, 1, 0, 0],
             [0, 0, 1, 0], [0, 0, 0, 1]])
# Dominance-restricted matrix (rules 1, 3, 4) and its facets.
A_DOM = fmat([[1, 1, 0], [0, 0, 1], [1, 0, 0], [0, 1, 1]])
H_DOM = fmat([[1, 0, -1, 0], [0, -1, 0, 1], [-1, -1, 1, 1], [1, 1, -1, -1],
              [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def normalized_rows(H):
    out = set()
    for row in H:
        lead = next(abs(x) for x in row if x != 0)
        out.add(tuple(Fraction(x) / lead for x in row))
    return out


def signaling_rule() -> JointChoiceRule:
    """DM 0 always takes its first option; DM 1 takes x from {x,w} when DM 0
    faces {x,w} but w when DM 0 faces {y,z}."""
    one = (F(1), F(0), F(0), F(0))
    probs = {
        (0, 0): one,
        (0, 1): one,
        (1, 0): (F(0), F(1), F(0), F(0)),
        (1, 1): one,
    }
    return JointChoiceRule(fs_space(), probs)


@pytest.fixture
def fs():
    return fs_space()


# One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
