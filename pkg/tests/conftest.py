from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qmextremal.series import HalfQSeries

settings.register_profile(
    "default", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []

small_rationals = st.builds(
    Fraction, st.integers(-20, 20), st.integers(1, 6)
)


@st.composite
def series(draw, order=80, base=st.integers(-3, 3), unit=False, square_lead=False):
    """Random series over ``order`` half-steps starting at a random base."""
    b = draw(base)
    coeffs = draw(st.lists(small_rationals, min_size=order, max_size=order))
    if unit or square_lead:
        lead = draw(st.builds(Fraction, st.integers(1, 7), st.integers(1, 5)))
        coeffs[0] = lead * lead if square_lead else lead * draw(st.sampled_from([1, -1]))
    return HalfQSeries(b, coeffs, b + order)


def record(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def q():
    return lambda order: HalfQSeries.monomial(2, 1, order)
