"""Invariant subspaces V_k, operator matrices and their spectra.

Bases are left unnormalized (normalizing needs square roots); operators are
represented by a pair (A, G) of an operator matrix and a Gram matrix, and
spectra are the generalized eigenvalues of that pencil.  Determinant signs,
ranks and invariance residuals are exact; only the eigensolve is numeric.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from .algebra import Polynomial, apply_linear_field, format_polynomial
from .crops import (
    Z1T,
    _field,
    check_t,
    connection_data,
    kohn_laplacian,
    paneitz,
)
from .harmonics import SphereFunction, gram_matrix, harmonic_basis, inner_product
from .linalg import (
    LinearAlgebraError,
    block_components,
    determinant,
    generalized_eigh,
    is_hermitian,
    is_positive_definite,
    rank,
    submatrix,
)

DEFAULT_PRECISION = 128


class SeedError(ValueError):
    pass


class InvarianceError(RuntimeError):
    """P(t) maps a basis vector of V_k outside V_k."""


def c_k(k: int, l: int) -> int:
    return (l - 2) * (2 * k - l + 2)


def norm_ratio(k: int, i: int) -> int:
    """prod_{l=1}^{i-1} c_k(2l+1) c_k(2l+2)."""
    out = 1
    for l in range(1, i):
        out *= c_k(k, 2 * l + 1) * c_k(k, 2 * l + 2)
    return out


@dataclass(frozen=True)
class VkBasis:
    k: int
    seed: Polynomial
    vectors: tuple
    norm_squares: tuple

    def bidegree(self, i: int) -> tuple:
        """Bidegree of u_i (1-based)."""
        return (2 * self.k - 2 * i + 1, 2 * i - 2)


def _seed_polynomial(k: int, seed_choice) -> Polynomial:
    n = 2 * k - 1
    if seed_choice is None or seed_choice == "default":
        return Polynomial.monomial(a=n)
    if isinstance(seed_choice, Polynomial):
        return seed_choice
    if isinstance(seed_choice, Mapping):
        try:
            return seed_choice[k]
        except KeyError:
            raise SeedError(f"no seed supplied for k={k}") from None
    if isinstance(seed_choice, str) and seed_choice.startswith("random:"):
        rng = random.Random(f"{seed_choice}:{k}")
        terms = {}
        while not terms:
            for j in range(n + 1):
                c = rng.randint(-5, 5)
                if c:
                    terms[(n - j, j, 0, 0)] = c
        return Polynomial(terms)
    raise SeedError(f"unknown seed choice {seed_choice!r}")


def build_vk(k: int, seed_choice="default") -> VkBasis:
    """u_i = Z1^(2i-2) v, i = 1..k, for a seed v in H_{2k-1,0}."""
    if k < 1:
        raise SeedError(f"k must be positive, got {k}")
    seed = _seed_polynomial(k, seed_choice)
    if seed.is_zero():
        raise SeedError("seed is zero")
    if seed.bidegrees() != {(2 * k - 1, 0)}:
        raise SeedError(
            f"seed {format_polynomial(seed)} is not in H_({2 * k - 1},0)"
        )
    z1 = _field(Fraction(0), Z1T)
    vectors = [seed]
    cur = seed
    for i in range(2, k + 1):
        cur = apply_linear_field(apply_linear_field(cur, z1), z1)
        if cur.is_zero():
            raise SeedError(
                f"Z1^{2 * i - 2} annihilates seed {format_polynomial(seed)} (k={k}, i={i})"
            )
        vectors.append(cur)
    norms = tuple(inner_product(u, u).re for u in vectors)
    return VkBasis(k, seed, tuple(vectors), norms)


@dataclass(frozen=True)
class MatrixPair:
    """Operator matrix A[i][j] = <Op e_j, e_i> and Gram matrix G[i][j] = <e_j, e_i>."""

    A: tuple
    G: tuple
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return len(self.A)

    def scaled(self, c) -> "MatrixPair":
        """Both matrices scaled, as for the measure multiplied by ``c``."""
        return MatrixPair(
            tuple(tuple(x * c for x in row) for row in self.A),
            tuple(tuple(x * c for x in row) for row in self.G),
            self.label,
            self.meta,
        )

    def permuted(self, order: Sequence[int]) -> "MatrixPair":
        return MatrixPair(
            tuple(tuple(self.A[i][j] for j in order) for i in order),
            tuple(tuple(self.G[i][j] for j in order) for i in order),
            self.label,
            self.meta,
        )

    def restricted(self, idx: Sequence[int]) -> "MatrixPair":
        return MatrixPair(
            tuple(map(tuple, submatrix(self.A, idx))),
            tuple(map(tuple, submatrix(self.G, idx))),
            self.label,
            self.meta,
        )


def _freeze(m) -> tuple:
    return tuple(tuple(row) for row in m)


def operator_matrices(vectors: Sequence[Polynomial], images: Sequence[Polynomial], label="") -> MatrixPair:
    n = len(vectors)
    a = [[inner_product(images[j], vectors[i]) for j in range(n)] for i in range(n)]
    return MatrixPair(_freeze(a), _freeze(gram_matrix(list(vectors))), label)


def assemble_paneitz_matrix(k: int, t, seed_choice="default", vk: VkBasis | None = None) -> MatrixPair:
    """(A, G) for (1 - t^2)^2 P(t) on V_k.

    Raises :class:`InvarianceError` unless every P(t) u_j re-expands in the
    u_i with zero remainder.
    """
    t = check_t(t)
    geom = connection_data(t)
    if vk is None:
        vk = build_vk(k, seed_choice)
    scale = geom.l * geom.l
    images = []
    for j, u in enumerate(vk.vectors):
        pu = paneitz(geom, SphereFunction(u)).poly.scale(scale)
        coeffs = [inner_product(pu, v) / n for v, n in zip(vk.vectors, vk.norm_squares)]
        remainder = pu - sum((v.scale(c) for v, c in zip(vk.vectors, coeffs)), Polynomial())
        if not remainder.is_zero():
            raise InvarianceError(f"P(t) u_{j + 1} leaves V_{k} at t={t}")
        images.append(pu)
    pair = operator_matrices(vk.vectors, images, label=f"P_{k}({t})")
    if not is_hermitian(pair.A):
        raise LinearAlgebraError(f"Paneitz matrix for k={k}, t={t} is not Hermitian")
    return pair


def exact_det_ratio(pair: MatrixPair) -> Fraction:
    """det(A)/det(G) as an exact rational (must be real)."""
    ratio = determinant(pair.A) / determinant(pair.G)
    if not ratio.is_real():
        raise LinearAlgebraError(f"non-real determinant ratio {ratio}")
    return ratio.re


def det_sign(pair: MatrixPair) -> int:
    """Exact sign of det(A)/det(G), the determinant sign in an orthonormal basis."""
    r = exact_det_ratio(pair)
    return (r > 0) - (r < 0)


@dataclass
class SpectrumReport:
    eigenvalues: list
    negative_count: int
    det_sign: int | None
    kernel_dim: int
    exact_det: Fraction | None
    precision: int = DEFAULT_PRECISION

    @property
    def consistent(self) -> bool:
        """Odd number of negatives iff det < 0 (when A is nonsingular)."""
        if self.kernel_dim or self.det_sign is None:
            return True
        return (self.negative_count % 2 == 1) == (self.det_sign < 0)

    @property
    def min_eigenvalue(self) -> float:
        return self.eigenvalues[0] if self.eigenvalues else float("nan")


def generalized_eigenvalues(pair: MatrixPair, precision: int = DEFAULT_PRECISION, exact: bool = True) -> SpectrumReport:
    """Spectrum of the pencil (A, G), block by block.

    Eigenvalues below -eps count as negative, eps = 2^(-precision/2) times
    the largest entry of the reduced matrix.  With ``exact`` the kernel
    dimension and determinant sign come from exact rational arithmetic.
    """
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    if not is_positive_definite(pair.G):
        raise LinearAlgebraError("Gram matrix is not Hermitian positive definite")
    values = []
    negative = 0
    kernel = 0
    for idx in block_components(pair.A, pair.G):
        a = submatrix(pair.A, idx)
        g = submatrix(pair.G, idx)
        evals, maxabs = generalized_eigh(a, g, precision)
        with mpmath.workprec(precision):
            eps = mpmath.ldexp(1, -precision // 2) * max(maxabs, 1)
            negative += sum(1 for v in evals if v < -eps)
            numeric_kernel = sum(1 for v in evals if abs(v) <= eps)
        kernel += (len(idx) - rank(a)) if exact else numeric_kernel
        values.extend(evals)
    values.sort()
    ratio = exact_det_ratio(pair) if exact else None
    sign = None if ratio is None else (ratio > 0) - (ratio < 0)
    return SpectrumReport(
        eigenvalues=[float(v) for v in values],
        negative_count=negative,
        det_sign=sign,
        kernel_dim=kernel,
        exact_det=ratio,
        precision=precision,
    )


def degree_basis(n: int) -> list:
    """Concatenated bases of H_{n,0}, H_{n-1,1}, ..., H_{0,n}."""
    out = []
    for p in range(n, -1, -1):
        out.extend(harmonic_basis(p, n - p).basis)
    return out


def kohn_block(t, n: int) -> MatrixPair:
    """(A, G) for Box_b(t) on the degree-n harmonics."""
    t = check_t(t)
    geom = connection_data(t)
    basis = degree_basis(n)
    images = [kohn_laplacian(geom, SphereFunction(e)).poly for e in basis]
    return operator_matrices(basis, images, label=f"Box_b({t}) deg {n}")


def kohn_positive_spectrum(t, n: int, precision: int = DEFAULT_PRECISION) -> list:
    """Positive eigenvalues of Box_b(t) on degree n, zeros removed exactly."""
    pair = kohn_block(t, n)
    out = []
    for idx in block_components(pair.A, pair.G):
        a = submatrix(pair.A, idx)
        g = submatrix(pair.G, idx)
        evals, _ = generalized_eigh(a, g, precision)
        kernel = len(idx) - rank(a)
        # Box_b >= 0: the kernel eigenvalues are the smallest ones
        out.extend(float(v) for v in evals[kernel:])
    return sorted(out)


def kohn_min_positive(t, max_degree: int, cutoffs: Sequence[int] | None = None, precision: int = DEFAULT_PRECISION) -> list:
    """[(N, smallest positive eigenvalue of Box_b(t) over degrees 1..N)]."""
    t = check_t(t)
    if cutoffs is None:
        cutoffs = range(1, max_degree + 1)
    cutoffs = sorted(cutoffs)
    running = None
    out = []
    n = 0
    for cut in cutoffs:
        while n < cut:
            n += 1
            positives = kohn_positive_spectrum(t, n, precision)
            if positives and (running is None or positives[0] < running):
                running = positives[0]
        out.append((cut, running))
    return out


@dataclass
class SweepRow:
    k: int
    t: Fraction
    det_sign: int | None
    negative_count: int
    min_eigenvalue: float
    eigenvalues: list
    kernel_dim: int
    exact_det: Fraction | None
    degree: int
    negative_count_check: int | None = None
    pair: MatrixPair | None = field(default=None, repr=False)

    @property
    def reproduced(self) -> bool:
        ok = self.negative_count == 1 and (self.det_sign is None or self.det_sign == -1)
        if self.negative_count_check is not None:
            ok = ok and self.negative_count_check == self.negative_count
        return ok


def _sweep_job(args) -> SweepRow:
    k, t, precision, seed_choice, exact, check_precision = args
    pair = assemble_paneitz_matrix(k, t, seed_choice)
    report = generalized_eigenvalues(pair, precision, exact=exact)
    check = None
    if check_precision:
        check = generalized_eigenvalues(pair, check_precision, exact=False).negative_count
    return SweepRow(
        k=k,
        t=t,
        det_sign=report.det_sign,
        negative_count=report.negative_count,
        min_eigenvalue=report.min_eigenvalue,
        eigenvalues=report.eigenvalues,
        kernel_dim=report.kernel_dim,
        exact_det=report.exact_det,
        degree=2 * k - 1,
        negative_count_check=check,
        pair=pair,
    )


def negative_spectrum_sweep(
    t_list,
    k_max: int,
    precision: int = DEFAULT_PRECISION,
    seed_choice="default",
    jobs: int = 1,
    exact: bool = True,
    check_precision: int | None = None,
) -> list:
    """One row per (t, k), ordered by t (as given) then k."""
    ts = [check_t(t) for t in t_list]
    for t in ts:
        if t == 0:
            raise ValueError("t = 0 is the standard sphere, not a Rossi sphere")
    tasks = [(k, t, precision, seed_choice, exact, check_precision) for t in ts for k in range(1, k_max + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_job, tasks))
    return [_sweep_job(task) for task in tasks]


def sphere_paneitz_eigenvalue(p: int, q: int) -> int:
    return p * q * (p + 1) * (q + 1)


def sphere_kohn_eigenvalue(p: int, q: int) -> int:
    return q * (p + 1)


def eigen_check(op, geom, p: int, q: int, expected) -> bool:
    """Op f == expected * f for every basis element of H_{p,q}."""
    for f in harmonic_basis(p, q).basis:
        image = op(geom, SphereFunction(f)).poly
        if image != f.scale(expected):
            return False
    return True


def sphere_report(max_degree: int) -> dict:
    """Exact eigenvalue laws of Box_b and P on the standard sphere."""
    geom = connection_data(0)
    rows = []
    kohn_ok = paneitz_ok = True
    for n in range(max_degree + 1):
        for p in range(n, -1, -1):
            q = n - p
            pe = sphere_paneitz_eigenvalue(p, q)
            ke = sphere_kohn_eigenvalue(p, q)
            p_ok = eigen_check(paneitz, geom, p, q, pe)
            k_ok = eigen_check(kohn_laplacian, geom, p, q, ke)
            kohn_ok &= k_ok
            paneitz_ok &= p_ok
            rows.append({"p": p, "q": q, "paneitz": pe, "kohn": ke, "paneitz_ok": p_ok, "kohn_ok": k_ok})
    kernel = [(r["p"], r["q"]) for r in rows if r["paneitz"] == 0]
    min_pos = min(r["kohn"] for r in rows if r["kohn"] > 0) if max_degree >= 1 else None
    return {
        "rows": rows,
        "kohn_ok": kohn_ok,
        "paneitz_ok": paneitz_ok,
        "nonnegative": all(r["paneitz"] >= 0 for r in rows),
        "kernel": kernel,
        "kernel_is_pluriharmonic": all(p * q == 0 for p, q in kernel)
        and len(kernel) == sum(1 for r in rows if r["p"] * r["q"] == 0),
        "min_positive_kohn": min_pos,
        "scal": geom.scal,
    }
