"""Exact and high-precision linear algebra over Gaussian rationals.

Exact routines (determinant, rank, null space, definiteness) clear
denominators row by row and then run Bareiss fraction-free elimination, so
every intermediate entry is a Gaussian integer and every division is exact.
Floating point only enters in :func:`generalized_eigh`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import mpmath

from .algebra import ONE, ZERO, GaussianRational

Matrix = Sequence[Sequence[GaussianRational]]


class LinearAlgebraError(ValueError):
    pass


def _gr(x) -> GaussianRational:
    return x if isinstance(x, GaussianRational) else GaussianRational.coerce(x)


def to_matrix(rows) -> list:
    return [[_gr(x) for x in row] for row in rows]


def _row_lcm(row) -> int:
    den = 1
    for x in row:
        den = math.lcm(den, x.re.denominator, x.im.denominator)
    return den


def _integer_rows(m: Matrix) -> tuple:
    """Scale each row to Gaussian-integer entries; return (rows, product of scales)."""
    out = []
    scale = 1
    for row in m:
        den = _row_lcm(row)
        scale *= den
        out.append([x * den for x in row])
    return out, scale


def _exact_div(x: GaussianRational, y: GaussianRational) -> GaussianRational:
    q = x / y
    # Bareiss divisions are exact in Z[i]
    assert q.re.denominator == 1 and q.im.denominator == 1, "inexact Bareiss division"
    return q


def _bareiss_echelon(rows: list, ncols: int, *, pivot_rows: bool = True):
    """In-place fraction-free row echelon form.

    Returns ``(pivot_columns, sign, last_pivot)`` where ``sign`` tracks row
    swaps.  With ``pivot_rows=False`` no swaps are done and elimination stops
    at the first zero pivot (used for leading principal minors).
    """
    nrows = len(rows)
    prev = ONE
    sign = 1
    r = 0
    pivots = []
    for col in range(ncols):
        if r >= nrows:
            break
        pr = None
        for i in range(r, nrows):
            if rows[i][col]:
                pr = i
                break
            if not pivot_rows:
                break
        if pr is None:
            if not pivot_rows:
                break
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
            sign = -sign
        piv = rows[r][col]
        for i in range(r + 1, nrows):
            ri = rows[i]
            a = ri[col]
            rr = rows[r]
            for j in range(col + 1, ncols):
                v = piv * ri[j] - a * rr[j]
                ri[j] = _exact_div(v, prev) if prev != ONE else v
            ri[col] = ZERO
        # entries left of the pivot in later rows are already zero
        prev = piv
        pivots.append(col)
        r += 1
    return pivots, sign, prev


def determinant(m: Matrix) -> GaussianRational:
    """Exact determinant via Bareiss elimination."""
    n = len(m)
    if n == 0:
        return ONE
    if any(len(row) != n for row in m):
        raise LinearAlgebraError("determinant of a non-square matrix")
    rows, scale = _integer_rows(to_matrix(m))
    pivots, sign, last = _bareiss_echelon(rows, n)
    if len(pivots) < n:
        return ZERO
    return last * sign / scale


def rank(m: Matrix) -> int:
    """Exact rank over Q(i)."""
    if not m:
        return 0
    rows, _ = _integer_rows(to_matrix(m))
    pivots, _, _ = _bareiss_echelon(rows, len(rows[0]))
    return len(pivots)


def nullspace(m: Matrix, ncols: int | None = None) -> list:
    """Basis of the right null space, one vector per free column.

    Vectors are scaled to primitive Gaussian-integer entries with the free
    variable's entry positive; the ordering follows the free columns, so the
    result is deterministic.
    """
    m = to_matrix(m)
    if ncols is None:
        if not m:
            raise LinearAlgebraError("ncols required for an empty matrix")
        ncols = len(m[0])
    if not m:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    rows, _ = _integer_rows(m)
    pivots, _, _ = _bareiss_echelon(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        x = [ZERO] * ncols
        x[fc] = ONE
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            row = rows[r]
            s = ZERO
            for j in range(pc + 1, ncols):
                if row[j] and x[j]:
                    s = s + row[j] * x[j]
            x[pc] = -s / row[pc]
        basis.append(_primitive(x))
    return basis


def _primitive(vec: list) -> list:
    den = 1
    for x in vec:
        den = math.lcm(den, x.re.denominator, x.im.denominator)
    vec = [x * den for x in vec]
    g = 0
    for x in vec:
        g = math.gcd(g, x.re.numerator, x.im.numerator)
    if g > 1:
        vec = [x / g for x in vec]
    return vec


def leading_minors(m: Matrix) -> list:
    """Exact leading principal minors det(m[:i,:i]) for i = 1..n.

    Stops early (shorter list) at the first vanishing minor.
    """
    n = len(m)
    rows = [list(r) for r in to_matrix(m)]
    scales = []
    for row in rows:
        den = _row_lcm(row)
        scales.append(den)
        for j in range(n):
            row[j] = row[j] * den
    minors = []
    prev = ONE
    acc = 1
    for k in range(n):
        piv = rows[k][k]
        acc *= scales[k]
        if not piv:
            minors.append(ZERO)
            break
        minors.append(piv / acc)
        for i in range(k + 1, n):
            ri = rows[i]
            a = ri[k]
            rk = rows[k]
            for j in range(k + 1, n):
                v = piv * ri[j] - a * rk[j]
                ri[j] = _exact_div(v, prev) if prev != ONE else v
            ri[k] = ZERO
        prev = piv
    return minors


def is_hermitian(m: Matrix) -> bool:
    n = len(m)
    return all(m[i][j] == m[j][i].conjugate() for i in range(n) for j in range(i, n))


def is_positive_definite(m: Matrix) -> bool:
    """Exact Sylvester test: Hermitian with all leading minors real and > 0."""
    if not is_hermitian(m):
        return False
    minors = leading_minors(m)
    return len(minors) == len(m) and all(x.is_real() and x.re > 0 for x in minors)


def block_components(*mats: Matrix) -> list:
    """Index groups of the finest common block-diagonal structure.

    Two indices are linked whenever any of the matrices has a nonzero entry
    coupling them.  Groups are returned sorted by their smallest index.
    """
    n = len(mats[0])
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for m in mats:
        for i in range(n):
            row = m[i]
            for j in range(i + 1, n):
                if row[j] or m[j][i]:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def submatrix(m: Matrix, idx: Sequence[int]) -> list:
    return [[m[i][j] for j in idx] for i in idx]


# -- numeric stage ------------------------------------------------------------


def _to_mp(x: GaussianRational, real: bool):
    re = mpmath.mpf(x.re.numerator) / x.re.denominator
    if real:
        return re
    return mpmath.mpc(re, mpmath.mpf(x.im.numerator) / x.im.denominator)


def generalized_eigh(a: Matrix, g: Matrix, precision: int = 128) -> tuple:
    """Eigenvalues of the Hermitian pencil (a, g) with g positive definite.

    Reduces to an ordinary Hermitian problem through the Cholesky factor of
    ``g`` at ``precision`` bits.  Returns ``(eigenvalues, max_abs_entry)``:
    ascending ``mpf`` eigenvalues and the largest modulus of an entry of the
    reduced matrix.
    """
    n = len(a)
    if n == 0:
        return [], mpmath.mpf(0)
    real = all(x.is_real() for row in a for x in row) and all(
        x.is_real() for row in g for x in row
    )
    with mpmath.workprec(precision):
        am = mpmath.matrix([[_to_mp(x, real) for x in row] for row in a])
        gm = mpmath.matrix([[_to_mp(x, real) for x in row] for row in g])
        try:
            low = mpmath.cholesky(gm)
        except ValueError as exc:
            raise LinearAlgebraError(f"Gram matrix is not positive definite: {exc}") from None
        # c = L^{-1} A L^{-H}
        linv = mpmath.inverse(low)
        c = linv * am * linv.transpose_conj()
        for i in range(n):
            c[i, i] = mpmath.re(c[i, i])
            for j in range(i + 1, n):
                avg = (c[i, j] + mpmath.conj(c[j, i])) / 2
                c[i, j] = avg
                c[j, i] = mpmath.conj(avg)
        if real:
            evals = mpmath.eigsy(c, eigvals_only=True)
        else:
            evals = mpmath.eighe(c, eigvals_only=True)
        values = sorted(mpmath.re(v) for v in evals)
        maxabs = max(abs(c[i, j]) for i in range(n) for j in range(n))
        # keep results at the working precision after leaving the context
        values = [+v for v in values]
    return values, maxabs


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
