import sys
from pathlib import Path

from hypothesis import assume
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from kfiltration.staircase import Staircase, StairSum  # noqa: E402

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: dict[int, str] = {}

staircases = st.lists(st.integers(1, 4), min_size=1, max_size=3).map(lambda h: Staircase(tuple(h)))


@st.composite
def small_sums(draw, max_generators: int = 120):
    """Signed staircase sums whose tensor complex has at most ``max_generators`` generators."""
    budget, terms = max_generators, []
    for _ in range(draw(st.integers(1, 3))):
        longest = min(3, (budget - 1) // 2)
        if longest < 1:
            break
        half = draw(st.lists(st.integers(1, 4), min_size=1, max_size=longest))
        terms.append((Staircase(tuple(half)), draw(st.sampled_from((1, -1)))))
        budget //= 2 * len(half) + 1
    s = StairSum(terms)
    assume(bool(s))
    return s


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
