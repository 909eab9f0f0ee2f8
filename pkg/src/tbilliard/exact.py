"""Exact scalars: rationals and elements a + b*sqrt(d) of a quadratic field.

Rationals are plain :class:`fractions.Fraction` values.  :class:`QuadScalar`
adds a single square-free radicand on top.  Every geometric predicate in the
package is decided through :func:`sign`, which only uses integer arithmetic.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC

import mpmath

__all__ = [
    "QuadScalar",
    "RadicandMismatchError",
    "normalize",
    "field_op",
    "sign",
    "as_scalar",
    "is_rational",
    "to_fraction",
    "simplify",
    "format_scalar",
    "parse_scalar",
    "to_mpf",
    "sqrt2",
]


class RadicandMismatchError(ValueError):
    """Two quadratic scalars with different radicands were combined."""


def normalize(num: int, den: int) -> Fraction:
    """Canonical reduced rational ``num/den`` with the sign on the numerator."""
    if den == 0:
        raise ZeroDivisionError("normalize: zero denominator")
    return Fraction(num, den)


def _is_squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadScalar:
    """Immutable ``a + b*sqrt(d)`` with rational ``a``, ``b``.

    ``d == 0`` is the degenerate pure-rational case (then ``b`` is forced to 0).
    Pure rationals (ints, Fractions, or ``d == 0`` scalars) are promoted when
    mixed with a ``d > 0`` scalar; two different positive radicands raise
    :class:`RadicandMismatchError`.

    Internally the value is held as integers ``(p + q*sqrt(d)) / den`` with
    ``den > 0`` and ``gcd(p, q, den) == 1``, so arithmetic costs one gcd
    chain per operation.
    """

    __slots__ = ("_p", "_q", "_den", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        if d < 0:
            raise ValueError("radicand must be nonnegative")
        if d == 0:
            if b != 0:
                raise ValueError("b must be zero when d == 0")
        elif d != 1 and not _is_squarefree(d):
            raise ValueError(f"radicand {d} is not square-free")
        if d == 1:
            a, b, d = a + b, Fraction(0), 0
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        self._set(a.numerator * (den // a.denominator), b.numerator * (den // b.denominator), den, d)

    def _set(self, p, q, den, d):
        g = math.gcd(math.gcd(p, q), den)
        if g > 1:
            p //= g
            q //= g
            den //= g
        object.__setattr__(self, "_p", p)
        object.__setattr__(self, "_q", q)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "d", d)

    @classmethod
    def _raw(cls, p, q, den, d):
        obj = object.__new__(cls)
        if den < 0:
            p, q, den = -p, -q, -den
        obj._set(p, q, den, d)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    @property
    def a(self) -> Fraction:
        return Fraction(self._p, self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._q, self._den)

    # -- coercion -------------------------------------------------------
    def _coerce(self, other):
        """Integer triple (p, q, den) of ``other`` and the common radicand."""
        if isinstance(other, QuadScalar):
            if other.d == self.d or other.d == 0:
                return other._p, other._q, other._den, self.d
            if self.d == 0:
                return other._p, other._q, other._den, other.d
            raise RadicandMismatchError(f"radicands {self.d} and {other.d} differ")
        if isinstance(other, int):
            return other, 0, 1, self.d
        if isinstance(other, Fraction) or isinstance(other, _RationalABC):
            return other.numerator, 0, other.denominator, self.d
        return None

    @property
    def is_rational(self) -> bool:
        return self._q == 0

    def conjugate(self) -> "QuadScalar":
        return QuadScalar._raw(self._p, -self._q, self._den, self.d)

    def norm(self) -> Fraction:
        return Fraction(self._p * self._p - self._q * self._q * self.d, self._den * self._den)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q, den, d = c
        if den == self._den:
            return QuadScalar._raw(self._p + p, self._q + q, den, d)
        return QuadScalar._raw(self._p * den + p * self._den, self._q * den + q * self._den, self._den * den, d)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q, den, d = c
        if den == self._den:
            return QuadScalar._raw(self._p - p, self._q - q, den, d)
        return QuadScalar._raw(self._p * den - p * self._den, self._q * den - q * self._den, self._den * den, d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q, den, d = c
        return QuadScalar._raw(p * self._den - self._p * den, q * self._den - self._q * den, self._den * den, d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q, den, d = c
        return QuadScalar._raw(self._p * p + self._q * q * d, self._p * q + p * self._q, self._den * den, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q, den, d = c
        n = p * p - q * q * d
        if n == 0:
            raise ZeroDivisionError("QuadScalar division by zero")
        # x / y = x * conj(y) * den_y / norm(y)
        return QuadScalar._raw(
            (self._p * p - self._q * q * d) * den,
            (self._q * p - self._p * q) * den,
            self._den * n,
            d,
        )

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q, den, d = c
        return QuadScalar._raw(p, q, den, d) / self

    def __neg__(self):
        return QuadScalar._raw(-self._p, -self._q, self._den, self.d)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison -----------------------------------------------------
    @staticmethod
    def _int_sign(p: int, q: int, d: int) -> int:
        sa = (p > 0) - (p < 0)
        sb = (q > 0) - (q < 0)
        if sb == 0 or sa == sb:
            return sa
        if sa == 0:
            return sb
        # opposite signs: the larger of p^2 and q^2*d wins
        return sa if p * p > q * q * d else sb

    def sign(self) -> int:
        return QuadScalar._int_sign(self._p, self._q, self.d)

    def _cmp(self, other):
        c = self._coerce(other)
        if c is None:
            return None
        p, q, den, d = c
        return QuadScalar._int_sign(self._p * den - p * self._den, self._q * den - q * self._den, d)

    def __eq__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q, den, _ = c
        return self._p * den == p * self._den and self._q * den == q * self._den

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __hash__(self):
        if self._q == 0:
            return hash(Fraction(self._p, self._den))
        return hash((self._p, self._q, self._den, self.d))

    def __bool__(self):
        return self._p != 0 or self._q != 0

    def __reduce__(self):
        return (QuadScalar, (self.a, self.b, self.d))

    # -- reporting ------------------------------------------------------
    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            v = mpmath.mpf(self._p)
            if self._q:
                v += mpmath.mpf(self._q) * mpmath.sqrt(self.d)
            return +(v / self._den)

    def __float__(self):
        return float(self.to_mpf(30))

    def __repr__(self):
        return f"QuadScalar({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_scalar(self)


def sqrt2(coef=1) -> QuadScalar:
    return QuadScalar(0, coef, 2)


def as_scalar(x, d: int = 0) -> QuadScalar:
    if isinstance(x, QuadScalar):
        return x
    return QuadScalar(Fraction(x), 0, d)


def is_rational(x) -> bool:
    if isinstance(x, QuadScalar):
        return x._q == 0
    return isinstance(x, (int, Fraction))


def to_fraction(x) -> Fraction:
    if isinstance(x, QuadScalar):
        if x.b != 0:
            raise ValueError(f"{x} is irrational")
        return x.a
    return Fraction(x)


def simplify(x):
    """Collapse a rational-valued QuadScalar to a Fraction; leave others alone."""
    if isinstance(x, QuadScalar) and x._q == 0:
        return Fraction(x._p, x._den)
    return x


def field_op(x, y, op: str):
    """Apply ``op`` in {add, sub, mul, div} to two scalars, exactly."""
    x, y = as_scalar(x), as_scalar(y)
    if x.d and y.d and x.d != y.d:
        raise RadicandMismatchError(f"radicands {x.d} and {y.d} differ")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown field op {op!r}")


def sign(x) -> int:
    if isinstance(x, QuadScalar):
        return x.sign()
    return (x > 0) - (x < 0)


def to_mpf(x, dps: int = 50):
    if isinstance(x, QuadScalar):
        return x.to_mpf(dps)
    x = Fraction(x)
    with mpmath.workdps(dps):
        return mpmath.mpf(x.numerator) / x.denominator


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def format_scalar(x) -> str:
    """``"p/q"`` for rationals, ``"p/q + r/s*sqrt(d)"`` for quadratic values."""
    if isinstance(x, QuadScalar):
        if x.b == 0:
            return _frac_str(x.a)
        return f"{_frac_str(x.a)} + {_frac_str(x.b)}*sqrt({x.d})"
    return _frac_str(Fraction(x))


_RAT = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^\s*(?:(?P<a>{_RAT})\s*(?P<op>[+-])\s*)?(?P<b>{_RAT})?\s*\*?\s*sqrt\(\s*(?P<d>\d+)\s*\)\s*$"
)


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`; also accepts ``"p/q+r/s*sqrt(2)"``.

    Rationals come back as Fractions, irrational values as QuadScalar.
    """
    s = text.strip()
    if "sqrt" not in s:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse scalar {text!r}") from exc
    m = _QUAD_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse scalar {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    braw = m.group("b")
    b = Fraction(braw) if braw else Fraction(1)
    if m.group("a") is not None and m.group("op") == "-":
        b = -b
    d = int(m.group("d"))
    if math.isqrt(d) ** 2 == d:
        return a + b * math.isqrt(d)
    return simplify(QuadScalar(a, b, d))
