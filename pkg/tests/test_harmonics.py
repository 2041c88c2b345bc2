from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import polynomials, w, wb, z, zb
from rossi_paneitz.algebra import Polynomial, monomials_of_bidegree
from rossi_paneitz.harmonics import (
    SphereFunction,
    canonicalize,
    flat_laplacian,
    gram_matrix,
    harmonic_basis,
    harmonic_project,
    inner_product,
    is_harmonic,
    monomial_integral,
)
from rossi_paneitz.linalg import leading_minors


def quadrature_integral(a, b, c, d, n_eta=40, n_angle=32):
    """Hopf-coordinate quadrature of z^a w^b zb^c wb^d over S^3 (mass 1).

    z = cos(eta) e^{i alpha}, w = sin(eta) e^{i beta},
    d(sigma) = sin(eta) cos(eta) d(eta) d(alpha) d(beta) / (2 pi^2).
    """
    x, wts = np.polynomial.legendre.leggauss(n_eta)
    eta = (x + 1) * np.pi / 4
    wts = wts * np.pi / 4
    ang = np.arange(n_angle) * 2 * np.pi / n_angle
    radial = np.sum(wts * np.cos(eta) ** (a + c) * np.sin(eta) ** (b + d) * np.sin(eta) * np.cos(eta))
    phase_a = np.mean(np.exp(1j * (a - c) * ang))
    phase_b = np.mean(np.exp(1j * (b - d) * ang))
    return radial * phase_a * phase_b * (2 * np.pi) ** 2 / (2 * np.pi**2)


@pytest.mark.parametrize(
    "exps,expected",
    [
        ((0, 0, 0, 0), Fraction(1)),
        ((1, 0, 0, 1), Fraction(0)),
        ((1, 0, 1, 0), Fraction(1, 2)),
        ((1, 1, 1, 1), Fraction(1, 6)),
    ],
)
def test_monomial_integral_examples(exps, expected):
    assert monomial_integral(*exps) == expected


def test_monomial_integral_matches_quadrature():
    for a in range(4):
        for b in range(4):
            for c in range(4):
                for d in range(4):
                    exact = float(monomial_integral(a, b, c, d))
                    assert abs(quadrature_integral(a, b, c, d) - exact) < 1e-12


def test_inner_product_examples():
    assert inner_product(z, z) == Fraction(1, 2)
    assert inner_product(z, w) == 0
    f = z * zb - w * wb
    # |z|^4 + |w|^4 - 2|z|^2|w|^2 integrates to 1/3 + 1/3 - 2/6
    assert inner_product(f, f) == Fraction(1, 3)


@settings(max_examples=40, deadline=None)
@given(polynomials(), polynomials())
def test_inner_product_hermitian(f, g):
    assert inner_product(f, g) == inner_product(g, f).conjugate()
    n = inner_product(f, f)
    assert n.is_real() and n.re >= 0


def test_flat_laplacian_examples():
    assert flat_laplacian(z).is_zero()
    assert flat_laplacian(z * zb) == Polynomial.constant(4)
    assert flat_laplacian(z * zb - w * wb).is_zero()


def test_harmonic_basis_examples():
    assert harmonic_basis(0, 0).basis == (Polynomial.constant(1),)
    assert set(harmonic_basis(1, 0).basis) == {z, w}
    h11 = harmonic_basis(1, 1)
    assert h11.dim == 3
    assert (z * zb - w * wb) in h11.basis or (w * wb - z * zb) in h11.basis


def test_harmonic_basis_deterministic():
    harmonic_basis.cache_clear()
    first = [str(f) for f in harmonic_basis(3, 2).basis]
    harmonic_basis.cache_clear()
    assert [str(f) for f in harmonic_basis(3, 2).basis] == first


def test_harmonic_basis_structure():
    for n in range(13):
        for p in range(n + 1):
            q = n - p
            space = harmonic_basis(p, q)
            assert space.dim == p + q + 1
            for f in space.basis:
                assert f.bidegrees() == {(p, q)}
                assert is_harmonic(f)


def test_cross_orthogonality_up_to_degree_12():
    spaces = [harmonic_basis(p, n - p) for n in range(13) for p in range(n + 1)]
    # distinct spaces with different p - q are orthogonal monomial by monomial;
    # only equal p - q needs the harmonic condition
    for i, s1 in enumerate(spaces):
        for s2 in spaces[i + 1:]:
            for f in s1.basis:
                for g in s2.basis:
                    assert inner_product(f, g) == 0


def test_gram_positive_definite():
    for n in range(9):
        for p in range(n + 1):
            g = gram_matrix(list(harmonic_basis(p, n - p).basis))
            minors = leading_minors(g)
            assert len(minors) == len(g)
            assert all(m.is_real() and m.re > 0 for m in minors)


def test_canonicalize_examples():
    assert canonicalize(z * zb + w * wb) == canonicalize(Polynomial.constant(1))
    f = canonicalize(z * zb)
    half = Fraction(1, 2)
    assert f.poly == Polynomial.constant(half) + (z * zb - w * wb).scale(half)
    h = harmonic_basis(2, 1).basis[1]
    assert canonicalize(h).poly == h


def test_harmonic_project_examples():
    assert harmonic_project(canonicalize(z * zb), 0, 0) == Polynomial.constant(Fraction(1, 2))
    assert harmonic_project(canonicalize(z), 1, 0) == z
    assert harmonic_project(canonicalize(z), 0, 1).is_zero()


@settings(max_examples=40, deadline=None)
@given(polynomials())
def test_canonicalize_preserves_function(f):
    c = canonicalize(f)
    for comp in c.components.values():
        assert is_harmonic(comp)
    deg = max(f.degree(), 0)
    for n in range(deg + 1):
        for p in range(n + 1):
            for m in monomials_of_bidegree(p, n - p):
                probe = Polynomial({m: 1})
                assert inner_product(c, probe) == inner_product(f, probe)
    # projection: canonicalizing the representative again changes nothing
    assert canonicalize(c.poly) == c


@settings(max_examples=40, deadline=None)
@given(polynomials())
def test_parseval(f):
    c = canonicalize(f)
    total = sum((inner_product(part, part) for part in c.components.values()), Fraction(0))
    assert inner_product(f, f) == total


def test_sphere_function_conjugate_swaps_bidegree():
    f = canonicalize(z * z * zb)
    assert set(f.components) == {(2, 1), (1, 0)}
    assert set(f.conjugate().components) == {(1, 2), (0, 1)}


def test_from_harmonic_rejects_non_harmonic():
    with pytest.raises(ValueError):
        SphereFunction.from_harmonic(z * zb)


def test_measure_scale_is_linear():
    f, g = z * wb + w, zb * w - 2
    assert inner_product(f, g, measure_scale=7) == inner_product(f, g) * 7
