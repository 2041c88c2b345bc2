from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import gaussian_rationals, polynomials, w, wb, z, zb
from rossi_paneitz.algebra import (
    I,
    ZERO_POLY,
    GaussianRational,
    Polynomial,
    bidegree_split,
    conjugate,
    derive,
    format_polynomial,
    parse_polynomial,
    poly_add,
    poly_mul,
)


def test_gaussian_rational_basics():
    a = GaussianRational(Fraction(1, 2), 3)
    assert a * a.inverse() == 1
    assert a.conjugate().conjugate() == a
    assert I * I == -1
    assert GaussianRational("2/4", 0) == Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()
    with pytest.raises(TypeError):
        GaussianRational(0.5)


def test_add_examples():
    f = z * w + zb
    assert poly_add(f, ZERO_POLY) == f
    assert poly_add(z, z.scale(-1)).is_zero()
    assert poly_add(z, z.scale(-1)).terms == {}
    assert (z + w) + (z - w) == z.scale(2)


def test_mul_examples():
    assert poly_mul(z, zb) == Polynomial.monomial(1, 0, 1, 0)
    assert (z + w) * (z - w) == z * z - w * w
    f = z * wb + 3
    assert Polynomial.constant(1) * f == f


def test_conjugate_examples():
    assert conjugate(z) == zb
    assert conjugate((z * wb).scale(I)) == (zb * w).scale(-I)
    f, g = z + (w * zb).scale(I), wb * wb - z.scale(GaussianRational(2, -1))
    assert conjugate(f * g) == conjugate(f) * conjugate(g)


def test_derive_examples():
    assert derive(z * z, "z") == z.scale(2)
    assert derive(z * wb, "wb") == z
    f, g = z * z * w + zb, z * wb + 1
    assert derive(f * g, "z") == derive(f, "z") * g + f * derive(g, "z")
    with pytest.raises(ValueError):
        derive(z, "x")


def test_bidegree_split_examples():
    assert bidegree_split(z + zb) == [((0, 1), zb), ((1, 0), z)]
    assert bidegree_split(z * zb) == [((1, 1), z * zb)]
    assert bidegree_split(ZERO_POLY) == []


def test_text_format_examples():
    assert format_polynomial((z * zb).scale(Fraction(1, 2))) == "1/2*z^1*zb^1"
    assert parse_polynomial("1/2*z^1*zb^1") == (z * zb).scale(Fraction(1, 2))
    f = parse_polynomial("(1/2)+(-3/4)i*w^2*wb^1 + (2)i + -7*z^3")
    assert f.coefficient((0, 2, 0, 1)) == GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert f.coefficient((0, 0, 0, 0)) == GaussianRational(0, 2)
    assert f.coefficient((3, 0, 0, 0)) == -7
    assert parse_polynomial("0").is_zero()
    with pytest.raises(ValueError):
        parse_polynomial("2 z")


def test_canonical_order_is_graded_lex():
    f = zb + z * z + 1 + w
    assert [m for m, _ in f.items()] == [(0, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 0), (2, 0, 0, 0)]


@settings(max_examples=60, deadline=None)
@given(polynomials(), polynomials(), polynomials())
def test_ring_laws(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f - f).is_zero()


@settings(max_examples=60, deadline=None)
@given(polynomials(), polynomials())
def test_conjugation_laws(f, g):
    assert conjugate(conjugate(f)) == f
    assert conjugate(f * g) == conjugate(f) * conjugate(g)
    assert conjugate(f + g) == conjugate(f) + conjugate(g)


@settings(max_examples=60, deadline=None)
@given(polynomials(), polynomials())
def test_leibniz_and_conjugate_swap(f, g):
    for var, bar in (("z", "zb"), ("w", "wb")):
        assert derive(f * g, var) == derive(f, var) * g + f * derive(g, var)
        assert conjugate(derive(f, var)) == derive(conjugate(f), bar)


@settings(max_examples=60, deadline=None)
@given(polynomials())
def test_bidegree_split_sums_back(f):
    parts = bidegree_split(f)
    total = ZERO_POLY
    for (p, q), part in parts:
        assert part.bidegrees() == {(p, q)}
        total = total + part
    assert total == f


@settings(max_examples=80, deadline=None)
@given(polynomials(max_terms=6))
def test_text_round_trip(f):
    assert parse_polynomial(format_polynomial(f)) == f


@given(gaussian_rationals(), gaussian_rationals(), gaussian_rationals())
def test_field_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if b:
        assert (a / b) * b == a
