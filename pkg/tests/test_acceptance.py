"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line; the same lines are
repeated in the terminal summary.  Run on its own with

    pytest tests/test_acceptance.py -v -s
"""

from fractions import Fraction

import pytest

from rossi_paneitz.crops import (
    connection_data,
    kohn_laplacian,
    paneitz,
    structure_ok,
    verify_structure_equations,
)
from rossi_paneitz.harmonics import SphereFunction, harmonic_basis, inner_product, is_harmonic
from rossi_paneitz.spectral import (
    assemble_paneitz_matrix,
    build_vk,
    det_sign,
    exact_det_ratio,
    generalized_eigenvalues,
    kohn_min_positive,
    negative_spectrum_sweep,
    norm_ratio,
    sphere_kohn_eigenvalue,
    sphere_paneitz_eigenvalue,
)

T_GRID = [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(9, 10)]
K_MAX = 10

# recorded at 128 bits; strict decrease is the claim, the values guard regressions
KOHN_TREND_T_HALF = {
    2: 0.3333333333333333,
    4: 0.1389982519138792,
    6: 0.051863265429361885,
    8: 0.017697581013909894,
}

RESULTS = {}


def report(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    RESULTS[number] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def sweep():
    return negative_spectrum_sweep(T_GRID, K_MAX, precision=128, check_precision=256)


def test_criterion_1_det_signs(sweep):
    bad = [(str(r.t), r.k, r.det_sign) for r in sweep if r.det_sign != -1]
    report(1, "det sign -1 for t in {1/2,-1/2,1/3,9/10}, k=1..10", not bad and len(sweep) == 40, f"failures={bad}")


def test_criterion_2_one_negative(sweep):
    bad = [(str(r.t), r.k, r.negative_count, r.negative_count_check) for r in sweep
           if r.negative_count != 1 or r.negative_count_check != 1]
    report(2, "exactly one negative eigenvalue at 128 bits, same at 256", not bad, f"failures={bad}")


def test_criterion_3_many_negatives(sweep):
    rows = [r for r in sweep if r.t == Fraction(1, 2)]
    blocks = sorted({r.degree for r in rows if r.negative_count >= 1})
    family_ok = sum(r.negative_count for r in rows) >= 10 and blocks == list(range(1, 20, 2))
    closed_form = []
    for t in [Fraction(1, 2), Fraction(1, 3), Fraction(-2, 7), Fraction(9, 10), Fraction(3, 5)]:
        pair = assemble_paneitz_matrix(1, t)
        closed_form.append(exact_det_ratio(pair) == -3 * t * t)
    ok = family_ok and all(closed_form)
    report(3, "10 negatives in degree blocks 1,3,...,19 at t=1/2; k=1 eigenvalue -3t^2 exact",
           ok, f"blocks={blocks}, closed_form={closed_form}")


def test_criterion_4_sphere_paneitz():
    geom = connection_data(0)
    bad = []
    for n in range(9):
        for p in range(n + 1):
            q = n - p
            lam = sphere_paneitz_eigenvalue(p, q)
            for f in harmonic_basis(p, q).basis:
                if paneitz(geom, SphereFunction(f)).poly != f.scale(lam):
                    bad.append((p, q))
            if lam < 0 or (lam == 0) != (p * q == 0):
                bad.append((p, q, "kernel"))
    report(4, "P(0) = pq(p+1)(q+1) on H(p,q), p+q<=8, kernel exactly pq=0", not bad, f"failures={bad}")


def test_criterion_5_sphere_kohn():
    geom = connection_data(0)
    bad = []
    positives = []
    for n in range(9):
        for p in range(n + 1):
            q = n - p
            lam = sphere_kohn_eigenvalue(p, q)
            for f in harmonic_basis(p, q).basis:
                if kohn_laplacian(geom, SphereFunction(f)).poly != f.scale(lam):
                    bad.append((p, q))
            if lam > 0:
                positives.append(lam)
    min_pos = min(positives)
    ok = not bad and min_pos == 1 == geom.scal / 2
    report(5, "Box_b(0) = q(p+1) on H(p,q), min positive 1 = Scal/2", ok, f"min={min_pos}, failures={bad}")


def test_criterion_6_identities():
    failures = []
    for t in [Fraction(0), Fraction(1, 2), Fraction(-1, 3)]:
        records = verify_structure_equations(connection_data(t), samples=20, max_degree=6, seed=0)
        if not structure_ok(records):
            failures.append((str(t), [r["identity"] for r in records if not r["passed"]]))
        for r in records:
            if r["identity"] != "structure_constants" and r["samples"] < 20:
                failures.append((str(t), r["identity"], "samples"))
        geom = connection_data(t)
        for n in range(7):
            basis = [f for p in range(n + 1) for f in harmonic_basis(p, n - p).basis]
            images = [paneitz(geom, SphereFunction(f), check=False) for f in basis]
            for i, f in enumerate(basis):
                for j, g in enumerate(basis):
                    if inner_product(images[i], g) != inner_product(f, images[j]):
                        failures.append((str(t), n, i, j))
    report(6, "identity suite exact at t=0,1/2,-1/3; <Pf,g> = <f,Pg> for p+q<=6", not failures,
           f"failures={failures[:5]}")


def test_criterion_7_kohn_trend():
    seq = kohn_min_positive(Fraction(1, 2), 8, cutoffs=[2, 4, 6, 8])
    values = [v for _, v in seq]
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    matches = all(v == pytest.approx(KOHN_TREND_T_HALF[n], rel=1e-12) for n, v in seq)
    report(7, "min positive Box_b(1/2) strictly decreasing over N=2,4,6,8", decreasing and matches,
           ", ".join(f"N={n}: {v:.6g}" for n, v in seq))


def test_criterion_8_structure():
    problems = []
    spaces = []
    for n in range(13):
        for p in range(n + 1):
            space = harmonic_basis(p, n - p)
            if space.dim != n + 1 or not all(is_harmonic(f) for f in space.basis):
                problems.append(("dim", p, n - p))
            spaces.append(space)
    for i, s1 in enumerate(spaces):
        for s2 in spaces[i + 1:]:
            if any(inner_product(f, g) != 0 for f in s1.basis for g in s2.basis):
                problems.append(("orth", s1.p, s1.q, s2.p, s2.q))
    for k in range(1, K_MAX + 1):
        vk = build_vk(k)
        for i in range(1, k + 1):
            if vk.norm_squares[i - 1] / vk.norm_squares[0] != norm_ratio(k, i):
                problems.append(("norm", k, i))
        # assembly raises unless P(t) V_k lands in V_k with zero remainder
        for t in T_GRID:
            assemble_paneitz_matrix(k, t, vk=vk)
    report(8, "dim H(p,q)=p+q+1 and orthogonality for p+q<=12; V_k norm ratios and invariance, k<=10",
           not problems, f"failures={problems[:5]}")


def test_reports_consistent_with_det_sign(sweep):
    # odd negative count iff negative determinant, on every row of the grid
    assert all(generalized_eigenvalues(r.pair).consistent for r in sweep[:K_MAX])
    assert all(det_sign(r.pair) == r.det_sign for r in sweep)
