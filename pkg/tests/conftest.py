import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from rmtori.field import FieldContext, is_squarefree

SMALL_D = [2, 3, 5, 6, 7, 10, 11, 13, 79]
SQUAREFREE_50 = [d for d in range(2, 51) if is_squarefree(d)]


def rand_elem(ctx, rng, span=20, den=8, nonzero=True):
    while True:
        x = Fraction(rng.randint(-span, span), rng.randint(1, den))
        y = Fraction(rng.randint(-span, span), rng.randint(1, den))
        a = ctx(x, y)
        if not (nonzero and a.is_zero()):
            return a


fractions_st = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@st.composite
def elements(draw, ctx, nonzero=False):
    a = ctx(draw(fractions_st), draw(fractions_st))
    if nonzero and a.is_zero():
        a = ctx(1)
    return a


@pytest.fixture
def rng():
    return random.Random(20261014)


@pytest.fixture(params=[2, 5, 10, 13])
def ctx(request):
    return FieldContext(request.param)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
