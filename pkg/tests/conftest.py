from collections import Counter

from hypothesis import strategies as st

# lines recorded by test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@st.composite
def partition_st(draw, min_n=0, max_n=10):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    if n == 0:
        return ()
    bins = draw(st.lists(st.integers(min_value=0, max_value=n - 1), min_size=n, max_size=n))
    return tuple(sorted(Counter(bins).values(), reverse=True))


@st.composite
def prediagram_st(draw, max_size=20):
    """A partition, some zero rows, then a nonempty partition: at most one ascent."""
    head = draw(partition_st(min_n=0, max_n=max_size - 1))
    zeros = draw(st.integers(min_value=0, max_value=3)) if head else 0
    tail = draw(partition_st(min_n=1, max_n=max_size - sum(head)))
    return head + (0,) * zeros + tail


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
