"""Laurent polynomials over Q with d/dt and Gauss norms at points eta_{c,r}.

``r`` is always written ``p**s`` with ``s`` rational; norms are returned as
``log_p`` values so that everything stays in Q.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .padic import NEG_INF, abs_log, as_fraction, format_rational, valp
from .tropical import TropicalPL, max_of


@dataclass(frozen=True)
class LaurentPoly:
    """Finitely supported ``{degree: coefficient}`` with no stored zeros."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        acc: dict[int, Fraction] = {}
        for k, a in self.terms:
            if not isinstance(k, int):
                raise TypeError("degrees must be integers")
            acc[k] = acc.get(k, Fraction(0)) + as_fraction(a)
        object.__setattr__(self, "terms", tuple(sorted((k, a) for k, a in acc.items() if a)))

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, object]) -> LaurentPoly:
        return cls(tuple(coeffs.items()))

    @classmethod
    def constant(cls, a) -> LaurentPoly:
        return cls(((0, as_fraction(a)),))

    @classmethod
    def monomial(cls, k: int, a=1) -> LaurentPoly:
        return cls(((k, as_fraction(a)),))

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> list[int]:
        return [k for k, _ in self.terms]

    def min_degree(self) -> int:
        return self.terms[0][0]

    def max_degree(self) -> int:
        return self.terms[-1][0]

    def has_negative_degree(self) -> bool:
        return bool(self.terms) and self.terms[0][0] < 0

    # ring operations
    def __add__(self, other) -> LaurentPoly:
        other = _coerce(other)
        return LaurentPoly(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(tuple((k, -a) for k, a in self.terms))

    def __sub__(self, other) -> LaurentPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> LaurentPoly:
        return _coerce(other) - self

    def __mul__(self, other) -> LaurentPoly:
        other = _coerce(other)
        return LaurentPoly(tuple((k1 + k2, a1 * a2)
                                 for k1, a1 in self.terms for k2, a2 in other.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            raise ValueError("negative powers of a polynomial are not Laurent polynomials")
        out = LaurentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def derive(self) -> LaurentPoly:
        return LaurentPoly(tuple((k - 1, k * a) for k, a in self.terms if k))

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        if x == 0 and self.has_negative_degree():
            raise ZeroDivisionError("pole at 0")
        return sum((a * x**k for k, a in self.terms), Fraction(0))

    def __str__(self):
        return format_laurent(self)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.constant(x)


def derive(f: LaurentPoly) -> LaurentPoly:
    return f.derive()


# -- text form --------------------------------------------------------------

_TERM = re.compile(
    r"(?P<coef>\d+(?:/\d+)?)?(?P<star>\*)?(?P<t>t(?:\^(?P<exp>-?\d+))?)?"
)


def parse_laurent(text: str) -> LaurentPoly:
    """Parse e.g. ``"1 + 1/2*t^-2 - 3*t"``.

    Raises ``ValueError`` whose ``args[1]`` is the 0-based column of the fault.
    """
    cols = [i for i, ch in enumerate(text) if not ch.isspace()]
    s = "".join(text[i] for i in cols)
    if not s:
        raise ValueError("empty polynomial", 0)
    terms = []
    pos = 0
    while pos < len(s):
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        elif pos:
            raise ValueError(f"expected '+' or '-' in {text!r}", cols[pos])
        m = _TERM.match(s, pos)
        coef, star, t = m.group("coef"), m.group("star"), m.group("t")
        if m.end() == pos or (star and not (coef and t)) or (coef and t and not star):
            raise ValueError(f"malformed term in {text!r}", cols[min(pos, len(s) - 1)])
        if coef and "/" in coef and int(coef.split("/")[1]) == 0:
            raise ValueError(f"zero denominator in {text!r}", cols[pos])
        a = Fraction(coef) if coef else Fraction(1)
        k = 0
        if t:
            k = int(m.group("exp")) if m.group("exp") is not None else 1
        terms.append((k, sign * a))
        pos = m.end()
    return LaurentPoly(tuple(terms))


def format_laurent(f: LaurentPoly) -> str:
    if f.is_zero():
        return "0"
    out = []
    for k, a in f.terms:
        mag = abs(a)
        if k == 0:
            body = format_rational(mag)
        else:
            mono = "t" if k == 1 else f"t^{k}"
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
        if not out:
            out.append(("-" if a < 0 else "") + body)
        else:
            out.append((" - " if a < 0 else " + ") + body)
    return "".join(out)


# -- Gauss norms ------------------------------------------------------------

def gauss_norm_log(f: LaurentPoly, s, p):
    """log_p |f(eta_{0,p^s})| = max_k (-v_p(a_k) + k*s); -inf for f = 0."""
    s = as_fraction(s)
    if f.is_zero():
        return NEG_INF
    return max(-valp(a, p) + k * s for k, a in f.terms)


def gauss_norm_pl(f: LaurentPoly, p, lo=NEG_INF, hi=float("inf")) -> TropicalPL:
    """``s -> gauss_norm_log(f, s, p)`` as a convex PL function on ``[lo, hi]``."""
    if f.is_zero():
        raise ValueError("norm of zero")
    return max_of(TropicalPL.affine(k, -valp(a, p), lo, hi) for k, a in f.terms)


def recenter_norm_log(f: LaurentPoly, c, s, p, J: int) -> tuple:
    """Certified ``(lower, upper)`` on log_p |f(eta_{c,p^s})|.

    ``f(c + u) = sum_j b_j u^j``.  The polynomial part is shifted exactly;
    each ``t^k`` with ``k < 0`` contributes its binomial series up to ``u^(J-1)``.
    Past that, ``|binom(k, j)| <= 1`` bounds every omitted contribution by
    ``max_{k<0} |a_k| |c|^k (p^s/|c|)^J``.
    """
    c, s = as_fraction(c), as_fraction(s)
    if J < 1:
        raise ValueError("truncation order J must be >= 1")
    if c == 0:
        raise ValueError("recentering needs c != 0")
    if f.is_zero():
        return NEG_INF, NEG_INF
    lc = abs_log(c, p)
    neg = f.has_negative_degree()
    if neg and s > lc:
        raise ValueError("pole inside disc")
    if neg and s == lc:
        # eta_{c,|c|} is the skeleton point eta_{0,|c|}
        v = gauss_norm_log(f, s, p)
        return v, v

    top = max(f.max_degree(), J - 1)
    tail = NEG_INF
    if neg:
        tail = max(-valp(a, p) + k * lc for k, a in f.terms if k < 0) + J * (s - lc)
    b = [Fraction(0)] * (top + 1)
    poly_part = [Fraction(0)] * (top + 1)
    inv_c = 1 / c
    for k, a in f.terms:
        # a * binom(k, j) * c^(k-j), updated in j
        term = a * c**k
        stop = k if k >= 0 else J - 1
        for jj in range(stop + 1):
            b[jj] += term
            if k >= 0:
                poly_part[jj] += term
            term = term * (k - jj) / (jj + 1) * inv_c
    exact_logs = []
    all_logs = []
    for jj in range(top + 1):
        coef = b[jj] if jj < J else poly_part[jj]
        if coef == 0:
            continue
        term = -valp(coef, p) + jj * s
        all_logs.append(term)
        if jj < J or term > tail:
            exact_logs.append(term)
    lower = max(exact_logs, default=NEG_INF)
    upper = max(all_logs + [tail])
    return lower, upper
