"""Exact Gaussian-rational polynomials in z, w, zb, wb.

A polynomial is a finite map from exponent tuples ``(a, b, c, d)`` (the
powers of z, w, zb = conj(z), wb = conj(w)) to :class:`GaussianRational`
coefficients.  Zero coefficients are never stored, so two polynomials are
equal iff their term maps are equal.

Text format (used by fixtures and the CLI)::

    1/2*z^1*zb^1 + (1/3)+(-2)i*w^2 + -5

Real coefficients print as ``p/q`` (or ``p``), purely imaginary ones as
``(p/q)i`` and general ones as ``(re)+(im)i``.  Terms are joined by
``" + "`` in graded-lexicographic order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Mapping, Union

VARIABLES = ("z", "w", "zb", "wb")
_VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}
# conjugation swaps z <-> zb and w <-> wb
_CONJ_INDEX = (2, 3, 0, 1)

Monomial = tuple  # (a, b, c, d)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        return cls(x)

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_coefficient(self)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _RationalABC)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, _RationalABC)):
                return GaussianRational._raw(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            if not d:
                return GaussianRational._raw(a * c, d)
            return GaussianRational._raw(a * c, a * d)
        if not d:
            return GaussianRational._raw(a * c, b * c)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Squared modulus ``re^2 + im^2``."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, _RationalABC)):
                if not other:
                    raise ZeroDivisionError("GaussianRational division by zero")
                return GaussianRational._raw(self.re / other, self.im / other)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

Scalar = Union[GaussianRational, Fraction, int]


def _gr(x) -> GaussianRational:
    return x if isinstance(x, GaussianRational) else GaussianRational.coerce(x)


def monomial_key(m: Monomial):
    """Graded-lexicographic sort key on exponent tuples."""
    return (sum(m), m)


class Polynomial:
    """Immutable polynomial in z, w, zb, wb with Gaussian-rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != 4 or min(mono) < 0:
                    raise ValueError(f"bad monomial exponents {mono!r}")
                coeff = _gr(coeff)
                if coeff:
                    clean[mono] = coeff
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict) -> "Polynomial":
        # caller guarantees no zero coefficients
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def monomial(cls, a=0, b=0, c=0, d=0, coeff: Scalar = 1) -> "Polynomial":
        return cls({(a, b, c, d): coeff})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        e = [0, 0, 0, 0]
        e[_VAR_INDEX[name]] = 1
        return cls({tuple(e): 1})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        """Copy of the term map."""
        return dict(self._terms)

    def items(self) -> Iterator:
        """Terms in canonical graded-lex order."""
        for m in sorted(self._terms, key=monomial_key):
            yield m, self._terms[m]

    def coefficient(self, mono: Monomial) -> GaussianRational:
        return self._terms.get(tuple(mono), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def bidegrees(self) -> set:
        return {(m[0] + m[1], m[2] + m[3]) for m in self._terms}

    def is_real(self) -> bool:
        return self == self.conjugate()

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, _RationalABC, GaussianRational)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)

    def __reduce__(self):
        return (parse_polynomial, (format_polynomial(self),))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._from_clean({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Polynomial.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        c = _gr(c)
        if not c:
            return ZERO_POLY
        return Polynomial._from_clean({m: v * c for m, v in self._terms.items()})

    def conjugate(self) -> "Polynomial":
        return conjugate(self)

    def derive(self, var: str) -> "Polynomial":
        return derive(self, var)


ZERO_POLY = Polynomial()


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    """Coefficient-wise sum with zero terms pruned."""
    if len(f._terms) < len(g._terms):
        f, g = g, f
    out = dict(f._terms)
    for m, c in g._terms.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return Polynomial._from_clean(out)


def poly_sum(polys: Iterable[Polynomial]) -> Polynomial:
    """Sum of many polynomials, accumulated in a single dict."""
    out: dict = {}
    for f in polys:
        for m, c in f._terms.items():
            s = out.get(m)
            out[m] = c if s is None else s + c
    return Polynomial._from_clean({m: c for m, c in out.items() if c})


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    """Distributive product; bidegrees add."""
    out: dict = {}
    for m1, c1 in f._terms.items():
        a1, b1, x1, y1 = m1
        for m2, c2 in g._terms.items():
            m = (a1 + m2[0], b1 + m2[1], x1 + m2[2], y1 + m2[3])
            p = c1 * c2
            s = out.get(m)
            out[m] = p if s is None else s + p
    return Polynomial._from_clean({m: c for m, c in out.items() if c})


def conjugate(f: Polynomial) -> Polynomial:
    """Complex conjugate: (a,b,c,d) -> (c,d,a,b), coefficients conjugated."""
    return Polynomial._from_clean(
        {(m[2], m[3], m[0], m[1]): c.conjugate() for m, c in f._terms.items()}
    )


def derive(f: Polynomial, var: str) -> Polynomial:
    """Formal partial derivative with respect to one of z, w, zb, wb."""
    try:
        i = _VAR_INDEX[var]
    except KeyError:
        raise ValueError(f"unknown variable {var!r}; expected one of {VARIABLES}") from None
    out = {}
    for m, c in f._terms.items():
        e = m[i]
        if e:
            n = list(m)
            n[i] = e - 1
            out[tuple(n)] = c * e
    return Polynomial._from_clean(out)


def apply_linear_field(f: Polynomial, field) -> Polynomial:
    """Apply ``sum coeff * x_mult * d/dx_deriv`` to ``f``.

    ``field`` is a sequence of ``(coeff, mult_index, deriv_index)`` with
    variable indices into ``VARIABLES``.  Every frame field on the sphere
    used in this package has this shape.
    """
    out: dict = {}
    for m, c in f._terms.items():
        for coeff, mi, di in field:
            e = m[di]
            if not e:
                continue
            n = list(m)
            n[di] = e - 1
            n[mi] += 1
            n = tuple(n)
            v = c * coeff * e
            s = out.get(n)
            out[n] = v if s is None else s + v
    return Polynomial._from_clean({m: c for m, c in out.items() if c})


def bidegree_split(f: Polynomial) -> list:
    """Split into bihomogeneous parts, sorted by bidegree.

    Returns a list of ``((p, q), component)`` whose components sum to ``f``.
    """
    parts: dict = {}
    for m, c in f._terms.items():
        parts.setdefault((m[0] + m[1], m[2] + m[3]), {})[m] = c
    return [(pq, Polynomial._from_clean(parts[pq])) for pq in sorted(parts)]


def bidegree_part(f: Polynomial, p: int, q: int) -> Polynomial:
    return Polynomial._from_clean(
        {m: c for m, c in f._terms.items() if m[0] + m[1] == p and m[2] + m[3] == q}
    )


def monomials_of_bidegree(p: int, q: int) -> list:
    """Exponent tuples spanning P_{p,q}, in graded-lex order."""
    out = [(a, p - a, c, q - c) for a in range(p + 1) for c in range(q + 1)]
    out.sort(key=monomial_key)
    return out


# -- text format ------------------------------------------------------------


def _format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_coefficient(c: GaussianRational) -> str:
    if not c.im:
        return _format_rational(c.re)
    if not c.re:
        return f"({_format_rational(c.im)})i"
    return f"({_format_rational(c.re)})+({_format_rational(c.im)})i"


def format_monomial(m: Monomial) -> str:
    return "*".join(f"{VARIABLES[i]}^{e}" for i, e in enumerate(m) if e)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for m, c in f.items():
        mono = format_monomial(m)
        coeff = format_coefficient(c)
        parts.append(f"{coeff}*{mono}" if mono else coeff)
    return " + ".join(parts)


_RAT = r"[-+]?\d+(?:/\d+)?"
_TERM_RE = re.compile(
    r"\s*(?:"
    rf"\((?P<re>{_RAT})\)\+\((?P<im>{_RAT})\)i"
    rf"|\((?P<pim>{_RAT})\)i"
    rf"|(?P<real>{_RAT})"
    r")?"
    r"(?P<mono>(?:\*?(?:zb|wb|z|w)(?:\^\d+)?)*)\s*"
)
_FACTOR_RE = re.compile(r"\*?(zb|wb|z|w)(?:\^(\d+))?")


def parse_polynomial(text: str) -> Polynomial:
    """Inverse of :func:`format_polynomial` (also accepts a few shorthands)."""
    text = text.strip()
    if text in ("", "0"):
        return ZERO_POLY
    terms: dict = {}
    pos = 0
    while True:
        match = _TERM_RE.match(text, pos)
        if match is None or match.end() == pos:
            raise ValueError(f"cannot parse polynomial at offset {pos}: {text[pos:pos + 20]!r}")
        if match.group("re") is not None:
            coeff = GaussianRational(match.group("re"), match.group("im"))
        elif match.group("pim") is not None:
            coeff = GaussianRational(0, match.group("pim"))
        elif match.group("real") is not None:
            coeff = GaussianRational(match.group("real"))
        else:
            coeff = ONE
        mono_text = match.group("mono")
        if not mono_text and match.group("real") is None and coeff is ONE:
            raise ValueError(f"empty term at offset {pos} in {text!r}")
        if mono_text and coeff is not ONE and not mono_text.startswith("*"):
            raise ValueError(f"missing '*' between coefficient and monomial in {text!r}")
        exps = [0, 0, 0, 0]
        for name, power in _FACTOR_RE.findall(mono_text):
            exps[_VAR_INDEX[name]] += int(power) if power else 1
        mono = tuple(exps)
        terms[mono] = terms.get(mono, ZERO) + coeff
        pos = match.end()
        if pos == len(text):
            break
        if text[pos] != "+":
            raise ValueError(f"expected '+' at offset {pos} in {text!r}")
        pos += 1
    return Polynomial(terms)
