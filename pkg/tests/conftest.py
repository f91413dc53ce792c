from fractions import Fraction

from hypothesis import strategies as st

from shallowlab.geometry import Line, Point

small = st.fractions(min_value=-50, max_value=50, max_denominator=20)
points = st.builds(Point, small, small)
lines = st.builds(Line, small, small)


def frac(s) -> Fraction:
    return Fraction(s)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
