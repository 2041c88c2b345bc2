"""Bigraded spherical harmonics on the unit sphere S^3 in C^2.

Functions on S^3 are stored as :class:`SphereFunction`: the sum of their
components in H_{p,q}.  Each component is a harmonic bihomogeneous
polynomial, so a single polynomial whose bidegree parts are all harmonic
determines the function uniquely.

The L^2 pairing uses the rotation-invariant measure of total mass 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .algebra import (
    ZERO,
    ZERO_POLY,
    GaussianRational,
    Polynomial,
    bidegree_split,
    monomials_of_bidegree,
    poly_mul,
    poly_sum,
)
from .linalg import nullspace


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return math.factorial(n)


@lru_cache(maxsize=None)
def monomial_integral(a: int, b: int, c: int, d: int) -> Fraction:
    """Integral of z^a w^b zb^c wb^d over S^3 (probability measure).

    Zero unless a == c and b == d; otherwise a! b! / (a + b + 1)!.
    """
    if a != c or b != d:
        return Fraction(0)
    return Fraction(_factorial(a) * _factorial(b), _factorial(a + b + 1))


def _poly(f) -> Polynomial:
    if isinstance(f, SphereFunction):
        return f.poly
    if isinstance(f, Polynomial):
        return f
    return Polynomial.constant(f)


def inner_product(f, g, measure_scale=1) -> GaussianRational:
    """Sesquilinear pairing <f, g> = integral of f * conj(g).

    Accepts polynomials (as functions restricted to the sphere) or
    :class:`SphereFunction` values.  ``measure_scale`` multiplies the measure.
    """
    ft = _poly(f)._terms
    gt = _poly(g)._terms
    if not ft or not gt:
        return ZERO
    # f-term (a,b,c,d) pairs with g-term (a',b',c',d') iff a-c == a'-c' and b-d == b'-d'
    buckets: dict = {}
    for m, c in gt.items():
        buckets.setdefault((m[0] - m[2], m[1] - m[3]), []).append((m, c.conjugate()))
    re = Fraction(0)
    im = Fraction(0)
    for m, c in ft.items():
        partners = buckets.get((m[0] - m[2], m[1] - m[3]))
        if not partners:
            continue
        for m2, c2 in partners:
            w = monomial_integral(m[0] + m2[2], m[1] + m2[3], m[2] + m2[0], m[3] + m2[1])
            prod = c * c2
            re += prod.re * w
            im += prod.im * w
    result = GaussianRational._raw(re, im)
    return result * measure_scale if measure_scale != 1 else result


def flat_laplacian(f) -> Polynomial:
    """Euclidean Laplacian on R^4 = C^2, i.e. 4 (d_z d_zb + d_w d_wb)."""
    f = _poly(f)
    out: dict = {}
    for m, c in f._terms.items():
        a, b, x, y = m
        if a and x:
            n = (a - 1, b, x - 1, y)
            v = c * (4 * a * x)
            s = out.get(n)
            out[n] = v if s is None else s + v
        if b and y:
            n = (a, b - 1, x, y - 1)
            v = c * (4 * b * y)
            s = out.get(n)
            out[n] = v if s is None else s + v
    return Polynomial._from_clean({m: c for m, c in out.items() if c})


def is_harmonic(f) -> bool:
    return flat_laplacian(f).is_zero()


SPHERE_RADIUS_SQ = Polynomial({(1, 0, 1, 0): 1, (0, 1, 0, 1): 1})


@dataclass(frozen=True)
class HarmonicSpace:
    p: int
    q: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


@lru_cache(maxsize=None)
def harmonic_basis(p: int, q: int) -> HarmonicSpace:
    """Exact basis of H_{p,q}: the kernel of the flat Laplacian on P_{p,q}.

    The kernel is computed by fraction-free elimination on the monomial
    basis in graded-lex order, giving primitive integer coefficients.
    """
    if p < 0 or q < 0:
        raise ValueError(f"bidegree must be non-negative, got ({p}, {q})")
    source = monomials_of_bidegree(p, q)
    if p == 0 or q == 0:
        return HarmonicSpace(p, q, tuple(Polynomial({m: 1}) for m in source))
    target = monomials_of_bidegree(p - 1, q - 1)
    row_of = {m: i for i, m in enumerate(target)}
    rows = [[0] * len(source) for _ in target]
    for j, m in enumerate(source):
        for mono, coeff in flat_laplacian(Polynomial({m: 1})).items():
            rows[row_of[mono]][j] = coeff
    vectors = nullspace(rows, len(source))
    basis = tuple(
        Polynomial({m: x for m, x in zip(source, vec) if x}) for vec in vectors
    )
    return HarmonicSpace(p, q, basis)


class SphereFunction:
    """A polynomial function on S^3 in harmonic-decomposed form.

    ``poly`` is the sum of the H_{p,q} components; every bidegree part of it
    is harmonic.  Build instances with :func:`canonicalize`.
    """

    __slots__ = ("poly",)

    def __init__(self, poly: Polynomial):
        self.poly = poly

    @classmethod
    def from_harmonic(cls, poly: Polynomial, check: bool = True) -> "SphereFunction":
        if check:
            for pq, part in bidegree_split(poly):
                if not is_harmonic(part):
                    raise ValueError(f"component of bidegree {pq} is not harmonic")
        return cls(poly)

    @property
    def components(self) -> dict:
        return dict(bidegree_split(self.poly))

    def component(self, p: int, q: int) -> Polynomial:
        return self.components.get((p, q), ZERO_POLY)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self):
        return not self.poly.is_zero()

    def __eq__(self, other):
        if isinstance(other, SphereFunction):
            return self.poly == other.poly
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"SphereFunction({self.poly})"

    def __add__(self, other):
        if not isinstance(other, SphereFunction):
            return NotImplemented
        return SphereFunction(self.poly + other.poly)

    def __sub__(self, other):
        if not isinstance(other, SphereFunction):
            return NotImplemented
        return SphereFunction(self.poly - other.poly)

    def __neg__(self):
        return SphereFunction(-self.poly)

    def scale(self, c) -> "SphereFunction":
        return SphereFunction(self.poly.scale(c))

    def __mul__(self, c):
        if isinstance(c, (SphereFunction, Polynomial)):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def conjugate(self) -> "SphereFunction":
        # conj maps H_{p,q} onto H_{q,p}
        return SphereFunction(self.poly.conjugate())

    def is_real(self) -> bool:
        return self.poly == self.poly.conjugate()

    def degrees(self) -> set:
        return {p + q for p, q in self.poly.bidegrees()}


def _harmonic_coefficients(m: int) -> list:
    # c_j = (-1)^j (m-j)! / (4^j j! m!) for R^4
    return [
        Fraction((-1) ** j * _factorial(m - j), 4**j * _factorial(j) * _factorial(m))
        for j in range(m // 2 + 1)
    ]


def _decompose_bihomogeneous(f: Polynomial, p: int, q: int):
    """Return (harmonic part h, remainders) with f = h + |x|^2 g on C^2.

    ``remainders`` lists the bihomogeneous pieces of g (as functions on the
    sphere, where |x|^2 = 1) keyed by bidegree.
    """
    if is_harmonic(f):
        return f, []
    coeffs = _harmonic_coefficients(p + q)
    laps = [f]
    for _ in range(1, min(p, q) + 1):
        nxt = flat_laplacian(laps[-1])
        if nxt.is_zero():
            break
        laps.append(nxt)
    pieces = [f]
    rho = Polynomial.constant(1)
    remainders = []
    for j in range(1, len(laps)):
        rho = poly_mul(rho, SPHERE_RADIUS_SQ)
        pieces.append(poly_mul(rho, laps[j]).scale(coeffs[j]))
        remainders.append(((p - j, q - j), laps[j].scale(-coeffs[j])))
    return poly_sum(pieces), remainders


def canonicalize(f) -> SphereFunction:
    """Harmonic decomposition of the restriction of ``f`` to S^3."""
    if isinstance(f, SphereFunction):
        return f
    f = _poly(f)
    pending: dict = {}
    for pq, part in bidegree_split(f):
        pending[pq] = part
    out = []
    # remainders only move to strictly lower total degree
    while pending:
        pq = max(pending, key=lambda k: (k[0] + k[1], k))
        part = pending.pop(pq)
        if part.is_zero():
            continue
        h, rest = _decompose_bihomogeneous(part, *pq)
        out.append(h)
        for key, g in rest:
            pending[key] = pending[key] + g if key in pending else g
    return SphereFunction(poly_sum(out))


def harmonic_project(f: Union[SphereFunction, Polynomial], p: int, q: int) -> Polynomial:
    """The H_{p,q} component (zero polynomial if absent)."""
    return canonicalize(f).component(p, q)


def gram_matrix(basis, measure_scale=1) -> list:
    """G[i][j] = <basis[j], basis[i]>."""
    n = len(basis)
    g = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = inner_product(basis[j], basis[i], measure_scale)
            g[i][j] = v
            g[j][i] = v.conjugate()
    return g
