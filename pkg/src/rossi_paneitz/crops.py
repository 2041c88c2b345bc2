"""Pseudo-Hermitian geometry of the Rossi spheres S^3_t and its operators.

The CR structure of S^3_t is spanned by Z1(t) = Z1 + t*Z1bar, where on C^2

    Z1    = wb d/dz - zb d/dw
    Z1bar = w d/dzb - z d/dwb
    T     = i (z d/dz + w d/dw - zb d/dzb - wb d/dwb)

with contact form theta = (i/2)(z dzb + w dwb - zb dz - wb dw).  All three
fields are tangent to S^3 and commute with the flat Laplacian, so they act
on :class:`SphereFunction` values component by component.

Connection data are *derived* from frame brackets rather than typed in:
:func:`connection_data` decomposes [T, Z1(t)], [T, Z1bar(t)] and
[Z1(t), Z1bar(t)] in the frame and reads off the Levi form l, the
theta-coefficient of the Tanaka-Webster connection form, and the torsion.
:func:`verify_structure_equations` then checks the commutation identities
on sampled functions with exact arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Union

from .algebra import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    Polynomial,
    apply_linear_field,
    format_polynomial,
)
from .harmonics import SphereFunction, canonicalize
from .linalg import nullspace

Z1T = "Z1t"
Z1BART = "Z1bart"
REEB = "Reeb"
FRAME_TAGS = (Z1T, Z1BART, REEB)

# covariant indices
HOL = "1"
ANTIHOL = "1b"
REEB_INDEX = "0"
INDICES = (HOL, ANTIHOL, REEB_INDEX)

_Z, _W, _ZB, _WB = range(4)


class GeometryError(ValueError):
    """Parameter outside the strictly pseudoconvex range."""


class ConsistencyError(RuntimeError):
    """Two independent evaluations of the same operator disagree."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("t must be an exact rational, not a float")
    return Fraction(x)


# -- vector fields on C^2 -----------------------------------------------------


def _field_z1(t: Fraction) -> tuple:
    one = ONE
    tt = GaussianRational(t)
    parts = [(one, _WB, _Z), (-one, _ZB, _W)]
    if t:
        parts += [(tt, _W, _ZB), (-tt, _Z, _WB)]
    return tuple(parts)


def _field_z1bar(t: Fraction) -> tuple:
    one = ONE
    tt = GaussianRational(t)
    parts = [(one, _W, _ZB), (-one, _Z, _WB)]
    if t:
        parts += [(tt, _WB, _Z), (-tt, _ZB, _W)]
    return tuple(parts)


_FIELD_T = ((I, _Z, _Z), (I, _W, _W), (-I, _ZB, _ZB), (-I, _WB, _WB))


def _field(t: Fraction, tag: str) -> tuple:
    if tag == Z1T:
        return _field_z1(t)
    if tag == Z1BART:
        return _field_z1bar(t)
    if tag == REEB:
        return _FIELD_T
    raise ValueError(f"unknown frame tag {tag!r}; expected one of {FRAME_TAGS}")


def _coordinate_images(field) -> list:
    """Coefficient polynomials X(z), X(w), X(zb), X(wb) of a linear field."""
    out = []
    for v in range(4):
        e = [0, 0, 0, 0]
        e[v] = 1
        out.append(apply_linear_field(Polynomial({tuple(e): 1}), field))
    return out


def _bracket_images(f1, f2) -> list:
    """Coordinate images of [X, Y] = X(Y(x)) - Y(X(x))."""
    y_img = _coordinate_images(f2)
    x_img = _coordinate_images(f1)
    return [apply_linear_field(y_img[v], f1) - apply_linear_field(x_img[v], f2) for v in range(4)]


def _decompose(images, frame) -> tuple:
    """Write a vector field as a constant combination of ``frame`` fields.

    Solves the exact linear system obtained by matching coefficients of the
    coordinate images and raises if no constant solution exists.
    """
    frame_images = [_coordinate_images(f) for f in frame]
    monos = sorted(
        {m for imgs in frame_images + [images] for img in imgs for m in img.terms}
    )
    rows = []
    for v in range(4):
        for m in monos:
            rows.append(
                [imgs[v].coefficient(m) for imgs in frame_images] + [-images[v].coefficient(m)]
            )
    ker = nullspace(rows, len(frame) + 1)
    sol = [k for k in ker if k[-1]]
    if len(ker) != 1 or not sol:
        raise GeometryError("bracket is not a constant combination of the frame")
    vec = sol[0]
    return tuple(x / vec[-1] for x in vec[:-1])


def contact_form_on(field) -> Polynomial:
    """theta(X) as a polynomial on C^2."""
    img = _coordinate_images(field)
    z, w, zb, wb = (Polynomial.var(n) for n in ("z", "w", "zb", "wb"))
    half_i = GaussianRational(0, Fraction(1, 2))
    return (z * img[_ZB] + w * img[_WB] - zb * img[_Z] - wb * img[_W]).scale(half_i)


def reeb_checks() -> dict:
    """Symbolic checks that T is the Reeb field of theta on C^2 representatives.

    Returns a dict of booleans: theta(T) = 1 on S^3, T contracted with
    d(theta) vanishes on TS^3, and T is tangent to S^3.
    """
    img = _coordinate_images(_FIELD_T)
    z, w, zb, wb = (Polynomial.var(n) for n in ("z", "w", "zb", "wb"))
    theta_t = canonicalize(contact_form_on(_FIELD_T))
    # d(theta) = i (dz^dzb + dw^dwb);  T -| d(theta) has coefficients on (dz, dzb, dw, dwb)
    contraction = [
        img[_ZB].scale(-I),
        img[_Z].scale(I),
        img[_WB].scale(-I),
        img[_W].scale(I),
    ]
    radial = [zb, z, wb, w]  # d(|z|^2 + |w|^2)
    lam = None
    proportional = True
    for c, r in zip(contraction, radial):
        # c must be a constant multiple of r
        m, coeff = next(iter(r.items()))
        ratio = c.coefficient(m) / coeff
        if lam is None:
            lam = ratio
        proportional &= c == r.scale(ratio) and ratio == lam
    rho = z * zb + w * wb
    tangent = apply_linear_field(rho, _FIELD_T).is_zero()
    return {
        "theta(T)=1": theta_t == canonicalize(Polynomial.constant(1)),
        "T-|dtheta=0": proportional,
        "T tangent": tangent,
    }


# -- geometry -----------------------------------------------------------------


@dataclass(frozen=True)
class RossiGeometry:
    """Tanaka-Webster data of (S^3_t, theta) in the frame Z1(t).

    ``omega`` is the theta-coefficient of the connection form (its
    horizontal part vanishes), ``torsion_a11`` is A_{11},
    ``torsion_aupbar`` is A^{1b1b} = A_{11} / l^2 and ``scal`` the
    Tanaka-Webster scalar curvature.
    """

    t: Fraction
    l: Fraction
    omega: GaussianRational
    torsion_a11: GaussianRational
    torsion_aupbar: GaussianRational
    scal: Fraction
    omega_h: GaussianRational = ZERO  # omega(Z1bar(t)); zero for the true connection

    @property
    def torsion_a1bar1bar(self) -> GaussianRational:
        return self.torsion_a11.conjugate()

    @property
    def omega_bar(self) -> GaussianRational:
        return self.omega.conjugate()

    def corrupted(self, delta=GaussianRational(0, 1)) -> "RossiGeometry":
        """Copy with the connection form perturbed (negative control)."""
        return replace(self, omega=self.omega + delta, omega_h=self.omega_h + delta)


def check_t(t) -> Fraction:
    t = _frac(t)
    if not abs(t) < 1:
        raise GeometryError(
            f"t = {t} violates strict pseudoconvexity: need 1 - t^2 > 0"
        )
    return t


def connection_data(t) -> RossiGeometry:
    """Derive l, omega, torsion and scalar curvature for S^3_t from brackets."""
    t = check_t(t)
    z1, z1b = _field_z1(t), _field_z1bar(t)
    frame = (z1, z1b, _FIELD_T)
    # [Z1(t), Z1bar(t)] = -i l T    (d theta = i l theta^1 ^ theta^1b)
    a, b, g = _decompose(_bracket_images(z1, z1b), frame)
    if a or b:
        raise GeometryError("[Z1(t), Z1bar(t)] has a horizontal part")
    l_val = g * I
    if not l_val.is_real() or l_val.re <= 0:
        raise GeometryError(f"Levi form {l_val} not positive")
    l = l_val.re
    # [T, Z1(t)] = omega(T) Z1(t) + (torsion part in Z1bar(t))
    om, tor, g = _decompose(_bracket_images(_FIELD_T, z1), frame)
    if g:
        raise GeometryError("[T, Z1(t)] has a T component")
    # d theta^1 (T, Z1bar) = -theta^1([T, Z1bar(t)]) = A^1_{1b}
    c1, _, g = _decompose(_bracket_images(_FIELD_T, z1b), frame)
    if g:
        raise GeometryError("[T, Z1bar(t)] has a T component")
    a_up1_1bar = -c1
    a_1bar1bar = a_up1_1bar * l
    a11 = a_1bar1bar.conjugate()
    # Omega = d omega = omega(T) d theta = i l omega(T) theta^1 ^ theta^1b
    scal = om * I
    if not scal.is_real():
        raise GeometryError("scalar curvature not real")
    return RossiGeometry(
        t=t,
        l=l,
        omega=om,
        torsion_a11=a11,
        torsion_aupbar=a11 / (l * l),
        scal=scal.re,
    )


def reference_constants(t) -> dict:
    """Closed-form values of the derived constants (hand derivation)."""
    t = check_t(t)
    l = 1 - t * t
    return {
        "l": l,
        "omega": GaussianRational(0, -2 * (1 + t * t) / l),
        "torsion_a11": GaussianRational(0, -4 * t),
        "torsion_aupbar": GaussianRational(0, -4 * t / (l * l)),
        "scal": 2 * (1 + t * t) / l,
    }


# -- operators ----------------------------------------------------------------

SphereLike = Union[SphereFunction, Polynomial]


def _sf(f) -> SphereFunction:
    return f if isinstance(f, SphereFunction) else canonicalize(f)


def _apply(geom: RossiGeometry, tag: str, f: SphereFunction) -> SphereFunction:
    # frame fields commute with the flat Laplacian: harmonic parts stay harmonic
    return SphereFunction(apply_linear_field(f.poly, _field(geom.t, tag)))


def frame_apply(geom: RossiGeometry, tag: str, f: SphereLike) -> SphereFunction:
    """Apply Z1(t), Z1bar(t) or T to ``f`` and canonicalize."""
    f = _sf(f)
    return canonicalize(apply_linear_field(f.poly, _field(geom.t, tag)))


def _z1(geom, f):
    return _apply(geom, Z1T, f)


def _z1b(geom, f):
    return _apply(geom, Z1BART, f)


def _reeb(geom, f):
    return _apply(geom, REEB, f)


def covariant_first(geom: RossiGeometry, f: SphereLike, index: str) -> SphereFunction:
    """f_1, f_1b or f_0."""
    f = _sf(f)
    if index == HOL:
        return _z1(geom, f)
    if index == ANTIHOL:
        return _z1b(geom, f)
    if index == REEB_INDEX:
        return _reeb(geom, f)
    raise ValueError(f"unknown index {index!r}; expected one of {INDICES}")


def _connection_on(geom: RossiGeometry, upper: str, direction: str) -> GaussianRational:
    """omega_A^A evaluated on the frame field of ``direction``."""
    if upper == REEB_INDEX:
        return ZERO  # nabla T = 0
    if upper == HOL:
        if direction == REEB_INDEX:
            return geom.omega
        if direction == ANTIHOL:
            return geom.omega_h
        return geom.omega_h.conjugate() * -1  # omega + omega_bar = 0 on Z1
    if direction == REEB_INDEX:
        return geom.omega_bar
    if direction == HOL:
        return geom.omega_h.conjugate()
    return -geom.omega_h


def covariant_second(geom: RossiGeometry, f: SphereLike, first: str, second: str) -> SphereFunction:
    """Second covariant derivative f_{first second} (``second`` differentiates last)."""
    fa = covariant_first(geom, f, first)
    out = covariant_first(geom, fa, second)
    w = _connection_on(geom, first, second)
    if w:
        out = out - fa.scale(w)
    return out


def kohn_laplacian(geom: RossiGeometry, f: SphereLike) -> SphereFunction:
    """Box_b f = -f_{1b}^{1b} = -(1/l) f_{1b 1}."""
    return covariant_second(geom, f, ANTIHOL, HOL).scale(Fraction(-1) / geom.l)


def reeb(geom: RossiGeometry, f: SphereLike) -> SphereFunction:
    return covariant_first(geom, f, REEB_INDEX)


def kohn_laplacian_bar(geom: RossiGeometry, f: SphereLike, check: bool = True) -> SphereFunction:
    """Conjugate Kohn Laplacian, conj(Box_b(conj f)).

    With ``check`` the result is compared against Box_b f - i T f.
    """
    f = _sf(f)
    out = kohn_laplacian(geom, f.conjugate()).conjugate()
    if check:
        other = kohn_laplacian(geom, f) - reeb(geom, f).scale(I)
        if other != out:
            raise ConsistencyError(
                f"Box_b-bar routes disagree on {format_polynomial(f.poly)} at t={geom.t}"
            )
    return out


def sub_laplacian(geom: RossiGeometry, f: SphereLike) -> SphereFunction:
    f = _sf(f)
    return kohn_laplacian(geom, f) + kohn_laplacian_bar(geom, f, check=False)


def torsion_derivative(geom: RossiGeometry) -> GaussianRational:
    """(A^{1b1b})_{,1b}: frame derivative plus connection terms.

    The torsion is constant in the frame, so only the connection part can
    contribute; it vanishes whenever omega has no horizontal part.
    """
    frame_derivative = ZERO  # Z1bar(t) of a constant
    return frame_derivative + geom.torsion_aupbar * (_connection_on(geom, ANTIHOL, ANTIHOL) * 2)


def q_op(geom: RossiGeometry, f: SphereLike) -> SphereFunction:
    """Q f = i (A^{1b1b} f_{1b})_{,1b}."""
    f = _sf(f)
    f1b = covariant_first(geom, f, ANTIHOL)
    f1b1b = covariant_second(geom, f, ANTIHOL, ANTIHOL)
    out = f1b1b.scale(geom.torsion_aupbar)
    dA = torsion_derivative(geom)
    if dA:
        out = out + f1b.scale(dA)
    return out.scale(I)


def q_bar_op(geom: RossiGeometry, f: SphereLike) -> SphereFunction:
    f = _sf(f)
    return q_op(geom, f.conjugate()).conjugate()


def paneitz(geom: RossiGeometry, f: SphereLike, check: bool = True) -> SphereFunction:
    """CR Paneitz operator, Box_b-bar Box_b + Q.

    With ``check`` it is also evaluated as the symmetrized form
    (1/2)(Box_b Box_b-bar + Box_b-bar Box_b + Q + Q-bar); the two must agree.
    """
    f = _sf(f)
    box = kohn_laplacian(geom, f)
    route_a = kohn_laplacian_bar(geom, box, check=False) + q_op(geom, f)
    if check:
        boxbar = kohn_laplacian_bar(geom, f, check=False)
        route_b = (
            kohn_laplacian(geom, boxbar)
            + kohn_laplacian_bar(geom, box, check=False)
            + q_op(geom, f)
            + q_bar_op(geom, f)
        ).scale(Fraction(1, 2))
        if route_a != route_b:
            raise ConsistencyError(
                f"Paneitz routes disagree on {format_polynomial(f.poly)} at t={geom.t}"
            )
    return route_a


def p1_op(geom: RossiGeometry, u: SphereLike) -> SphereFunction:
    """P_1 u = u_{1b}^{1b}_{,1} + i A_{11} u^1."""
    u = _sf(u)
    inner = covariant_second(geom, u, ANTIHOL, HOL).scale(Fraction(1) / geom.l)
    # inner is a function, so its covariant derivative is the frame derivative
    out = covariant_first(geom, inner, HOL)
    u_up1 = covariant_first(geom, u, ANTIHOL).scale(Fraction(1) / geom.l)
    return out + u_up1.scale(geom.torsion_a11 * I)


def p1bar_op(geom: RossiGeometry, u: SphereLike) -> SphereFunction:
    """P_1b u = u_1^1_{,1b} - i A_{1b1b} u^{1b}."""
    u = _sf(u)
    inner = covariant_second(geom, u, HOL, ANTIHOL).scale(Fraction(1) / geom.l)
    out = covariant_first(geom, inner, ANTIHOL)
    u_up1b = covariant_first(geom, u, HOL).scale(Fraction(1) / geom.l)
    return out - u_up1b.scale(geom.torsion_a1bar1bar * I)


def paneitz_divergence(geom: RossiGeometry, u: SphereLike) -> SphereFunction:
    """P u = (1/2)((P_1 u)_{,}^{1} + (P_1b u)_{,}^{1b})."""
    u = _sf(u)
    a = covariant_first(geom, p1_op(geom, u), ANTIHOL)
    b = covariant_first(geom, p1bar_op(geom, u), HOL)
    return (a + b).scale(Fraction(1, 2) / geom.l)


def dc_cr_components(geom: RossiGeometry, u: SphereLike) -> tuple:
    """Frame components of d^c_CR u: (theta^1b, theta^1, theta) coefficients."""
    u = _sf(u)
    if not u.is_real():
        raise ValueError("d^c_CR is defined on real-valued functions")
    half_i = GaussianRational(0, Fraction(1, 2))
    return (
        covariant_first(geom, u, ANTIHOL).scale(half_i),
        covariant_first(geom, u, HOL).scale(-half_i),
        sub_laplacian(geom, u).scale(Fraction(1, 2)),
    )


def exterior_derivative(geom: RossiGeometry, alpha: tuple) -> dict:
    """d of the 1-form alpha_1b theta^1b + alpha_1 theta^1 + alpha_0 theta.

    Uses the coframe structure equations
        d theta    = i l theta^1 ^ theta^1b
        d theta^1  = -omega(T) theta ^ theta^1 + A^1_{1b} theta ^ theta^1b
    and their conjugates; returns the coefficients of theta^theta^1,
    theta^theta^1b and theta^1^theta^1b.
    """
    a1b, a1, a0 = alpha
    inv_l = Fraction(1) / geom.l
    a_up = geom.torsion_a1bar1bar * inv_l  # A^1_{1b}
    a_up_bar = a_up.conjugate()  # A^{1b}_1
    om = geom.omega
    th_th1 = (
        a1b.scale(a_up_bar)
        + reeb(geom, a1)
        - a1.scale(om)
        - covariant_first(geom, a0, HOL)
    )
    th_th1b = (
        reeb(geom, a1b)
        - a1b.scale(om.conjugate())
        + a1.scale(a_up)
        - covariant_first(geom, a0, ANTIHOL)
    )
    th1_th1b = (
        covariant_first(geom, a1b, HOL)
        - covariant_first(geom, a1, ANTIHOL)
        + a0.scale(I * geom.l)
    )
    return {"theta^theta1": th_th1, "theta^theta1b": th_th1b, "theta1^theta1b": th1_th1b}


def ddc_cr(geom: RossiGeometry, u: SphereLike) -> dict:
    return exterior_derivative(geom, dc_cr_components(geom, u))


# -- identity suite -------------------------------------------------------------


def sample_polynomials(count: int = 20, max_degree: int = 6, seed: int = 0) -> list:
    """Deterministic pseudo-random polynomials with Gaussian-rational coefficients."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        terms = {}
        for _ in range(rng.randint(1, 4)):
            deg = rng.randint(0, max_degree)
            cuts = sorted(rng.randint(0, deg) for _ in range(3))
            mono = (cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], deg - cuts[2])
            coeff = GaussianRational(
                Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
            )
            terms[mono] = coeff
        f = Polynomial(terms)
        if not f.is_zero():
            out.append(f)
    return out


def _identities(geom: RossiGeometry):
    """(name, residual function) pairs; every residual must vanish exactly."""

    def comm_a(f):
        lhs = covariant_second(geom, f, HOL, ANTIHOL) - covariant_second(geom, f, ANTIHOL, HOL)
        return lhs - covariant_first(geom, f, REEB_INDEX).scale(I * geom.l)

    def comm_b(f):
        lhs = covariant_second(geom, f, REEB_INDEX, HOL) - covariant_second(geom, f, HOL, REEB_INDEX)
        f_up1 = covariant_first(geom, f, ANTIHOL).scale(Fraction(1) / geom.l)
        return lhs - f_up1.scale(geom.torsion_a11)

    def kohn_bar(f):
        via_conj = kohn_laplacian(geom, f.conjugate()).conjugate()
        return via_conj - (kohn_laplacian(geom, f) - reeb(geom, f).scale(I))

    def bracket(f):
        lhs = kohn_laplacian(geom, kohn_laplacian_bar(geom, f, check=False)) - kohn_laplacian_bar(
            geom, kohn_laplacian(geom, f), check=False
        )
        return lhs - (q_op(geom, f) - q_bar_op(geom, f))

    def routes(f):
        box = kohn_laplacian(geom, f)
        boxbar = kohn_laplacian_bar(geom, f, check=False)
        route_a = kohn_laplacian_bar(geom, box, check=False) + q_op(geom, f)
        route_b = (
            kohn_laplacian(geom, boxbar)
            + kohn_laplacian_bar(geom, box, check=False)
            + q_op(geom, f)
            + q_bar_op(geom, f)
        ).scale(Fraction(1, 2))
        return route_a - route_b

    def divergence(f):
        return paneitz(geom, f, check=False) - paneitz_divergence(geom, f)

    def reality(f):
        return paneitz(geom, f.conjugate(), check=False) - paneitz(geom, f, check=False).conjugate()

    return [
        ("commutator_1_1bar", comm_a),
        ("commutator_0_1", comm_b),
        ("kohn_bar_relation", kohn_bar),
        ("kohn_bracket_Q", bracket),
        ("paneitz_routes", routes),
        ("paneitz_divergence", divergence),
        ("paneitz_real", reality),
    ]


IDENTITY_NAMES = tuple(name for name, _ in _identities(connection_data(0)))


def verify_structure_equations(
    geom: RossiGeometry, samples: int = 20, max_degree: int = 6, seed: int = 0
) -> list:
    """Run the identity suite on sampled functions.

    Returns one record per identity: ``{"identity", "t", "seed", "samples",
    "passed", "witness"}`` where ``witness`` is the first polynomial with a
    nonzero residual (``None`` when the identity passes).
    """
    polys = sample_polynomials(samples, max_degree, seed)
    funcs = [canonicalize(p) for p in polys]
    t_str = f"{geom.t.numerator}/{geom.t.denominator}"
    records = []
    for name, residual in _identities(geom):
        witness = None
        for poly, f in zip(polys, funcs):
            if not residual(f).is_zero():
                witness = format_polynomial(poly)
                break
        records.append(
            {
                "identity": name,
                "t": t_str,
                "seed": seed,
                "samples": len(polys),
                "passed": witness is None,
                "witness": witness,
            }
        )
    # constants must match the connection derived from frame brackets
    derived = connection_data(geom.t)
    mismatched = [
        name
        for name in ("l", "omega", "torsion_a11", "torsion_aupbar", "scal", "omega_h")
        if getattr(derived, name) != getattr(geom, name)
    ]
    records.append(
        {
            "identity": "structure_constants",
            "t": t_str,
            "seed": seed,
            "samples": 0,
            "passed": not mismatched,
            "witness": ",".join(mismatched) or None,
        }
    )
    return records


def structure_ok(records) -> bool:
    return all(r["passed"] for r in records)
