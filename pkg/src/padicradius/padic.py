"""Exact p-adic valuations on the rationals.

The base field is Q_p, modelled by exact rationals.  All logarithms in the
package are base p, so ``abs_log(q) = -v_p(q)`` and ``abs_log(p) = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

INF = float("inf")
NEG_INF = float("-inf")


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"``; decimal points and exponents are refused."""
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"not an exact rational literal: {text!r}")
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not an exact rational literal: {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rational(x) -> str:
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Prime:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError("prime must be an int")
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    def __int__(self):
        return self.p

    def __index__(self):
        return self.p

    def __str__(self):
        return str(self.p)


def _prime_int(p) -> int:
    return p.p if isinstance(p, Prime) else int(p)


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valp(q, p) -> int:
    """Exponent of ``p`` in the factorisation of the nonzero rational ``q``."""
    q = as_fraction(q)
    if q == 0:
        raise ValueError("valuation of zero")
    p = _prime_int(p)
    return _int_val(q.numerator, p) - _int_val(q.denominator, p)


def valp_or_inf(q, p):
    q = as_fraction(q)
    return INF if q == 0 else valp(q, p)


def abs_log(q, p):
    """log_p |q|_p, with -inf for zero."""
    q = as_fraction(q)
    return NEG_INF if q == 0 else -valp(q, p)


def digit_sum(n: int, p) -> int:
    p = _prime_int(p)
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


def val_factorial(n: int, p) -> int:
    """v_p(n!) via Legendre: (n - s_p(n)) / (p - 1)."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    p = _prime_int(p)
    return (n - digit_sum(n, p)) // (p - 1)


@dataclass(frozen=True)
class ValuedRational:
    """A rational together with its exact p-adic valuation (``inf`` for zero)."""

    value: Fraction
    prime: Prime

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))

    @property
    def val(self):
        return valp_or_inf(self.value, self.prime)

    @property
    def abs_log(self):
        return -self.val

    def _coerce(self, other) -> Fraction:
        if isinstance(other, ValuedRational):
            if other.prime != self.prime:
                raise ValueError("mixed primes")
            return other.value
        return as_fraction(other)

    def __add__(self, other):
        return ValuedRational(self.value + self._coerce(other), self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        return ValuedRational(self.value - self._coerce(other), self.prime)

    def __neg__(self):
        return ValuedRational(-self.value, self.prime)

    def __mul__(self, other):
        return ValuedRational(self.value * self._coerce(other), self.prime)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ValuedRational(self.value / self._coerce(other), self.prime)
