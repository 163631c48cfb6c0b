import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from toeplitzq.scalar import Scalar

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(Scalar, rationals, rationals)


@pytest.fixture
def rng():
    return random.Random(1234)


def F(a, b=1):
    return Fraction(a, b)


# filled by test_acceptance.report and echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
