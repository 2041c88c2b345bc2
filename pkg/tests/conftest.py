from fractions import Fraction

import pytest
from hypothesis import strategies as st

from rossi_paneitz.algebra import GaussianRational, Polynomial

z = Polynomial.var("z")
w = Polynomial.var("w")
zb = Polynomial.var("zb")
wb = Polynomial.var("wb")


def rationals(bound=100):
    return st.builds(
        Fraction,
        st.integers(-bound, bound),
        st.integers(1, bound),
    )


def gaussian_rationals(bound=100):
    return st.builds(GaussianRational, rationals(bound), rationals(bound))


@st.composite
def monomials(draw, max_degree=6):
    deg = draw(st.integers(0, max_degree))
    cuts = sorted(draw(st.lists(st.integers(0, deg), min_size=3, max_size=3)))
    return (cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], deg - cuts[2])


def polynomials(max_degree=6, max_terms=4):
    return st.dictionaries(monomials(max_degree), gaussian_rationals(), max_size=max_terms).map(Polynomial)


@pytest.fixture
def vars4():
    return z, w, zb, wb


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
