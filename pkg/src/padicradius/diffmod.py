"""Differential modules on discs and annuli and their radius of convergence.

The module is given by a matrix ``G`` of Laurent polynomials in the
coordinate ``t``.  With ``G_1 = G`` and ``G_{n+1} = d(G_n) + G_n G`` the
embedded radius at the skeleton point ``eta_{p^s}`` is estimated by

    log_p R = min(cap(s), min_{n <= N} -(log_p|G_n| + v_p(n!)) / n)

where ``cap`` is log_p of the radius of the biggest disc around a generic
point that fits in the domain.  The estimate is reported together with
its order ``N``; the true radius is a liminf and no tail bound is claimed.

Orientation: the skeleton is always parametrised by increasing ``s``; on a
disc this runs from the centre to the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .laurent import LaurentPoly, gauss_norm_log, gauss_norm_pl, recenter_norm_log
from .padic import INF, NEG_INF, Prime, abs_log, as_fraction, val_factorial
from .tropical import TropicalPL

Matrix = tuple[tuple[LaurentPoly, ...], ...]


@dataclass(frozen=True)
class Domain:
    """Open disc ``D(0, p^s0)`` or open annulus ``C(0; p^s1, p^s2)``.

    Radii are stored as log_p values.  Skeleton evaluation treats the
    closure of the skeleton, so the ends ``s1``, ``s2`` and ``s0`` are valid
    abscissae for the PL functions.
    """

    kind: str
    s0: Fraction | None = None
    s1: Fraction | None = None
    s2: Fraction | None = None

    def __post_init__(self):
        if self.kind == "disc":
            if self.s0 is None or self.s1 is not None or self.s2 is not None:
                raise ValueError("a disc takes s0 only")
            object.__setattr__(self, "s0", as_fraction(self.s0))
        elif self.kind == "annulus":
            if self.s1 is None or self.s2 is None or self.s0 is not None:
                raise ValueError("an annulus takes s1 and s2 only")
            s1, s2 = as_fraction(self.s1), as_fraction(self.s2)
            if not s1 < s2:
                raise ValueError("annulus needs s1 < s2")
            object.__setattr__(self, "s1", s1)
            object.__setattr__(self, "s2", s2)
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def disc(cls, s0) -> Domain:
        return cls("disc", s0=s0)

    @classmethod
    def annulus(cls, s1, s2) -> Domain:
        return cls("annulus", s1=s1, s2=s2)

    @property
    def is_disc(self) -> bool:
        return self.kind == "disc"

    @property
    def skeleton(self) -> tuple:
        """``(lo, hi)`` of the skeleton in the log-radius coordinate."""
        return (NEG_INF, self.s0) if self.is_disc else (self.s1, self.s2)

    @property
    def modulus_log(self):
        return INF if self.is_disc else self.s2 - self.s1

    def contains(self, c, s, p) -> bool:
        c, s = as_fraction(c), as_fraction(s)
        lt = max(s, abs_log(c, p)) if c else s
        lo, hi = self.skeleton
        return lo <= lt <= hi

    def cap(self) -> TropicalPL:
        """log_p of the radius of the biggest open disc around a generic point of eta_{p^s}.

        On a disc it is the disc itself; on an annulus it is ``|t| = p^s``.
        The annulus boundary never binds for such discs, the min with ``s2``
        only keeps the formula honest on the closed skeleton.
        """
        lo, hi = self.skeleton
        if self.is_disc:
            return TropicalPL.constant(self.s0, lo, hi)
        return TropicalPL.identity(lo, hi).clamp_above(self.s2)

    def cap_at(self, c, s, p) -> Fraction:
        """Cap at the possibly off-skeleton point ``eta_{c,p^s}``."""
        if self.is_disc:
            return self.s0
        s = as_fraction(s)
        return max(s, abs_log(c, p)) if c else s


@dataclass(frozen=True)
class Triangulation:
    """Marked skeleton points ``eta_{p^s}``, given by their log-radii."""

    marks: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "marks", tuple(sorted(set(as_fraction(m) for m in self.marks))))

    def validate(self, domain: Domain):
        lo, hi = domain.skeleton
        for m in self.marks:
            if not lo < m < hi:
                raise ValueError(f"mark {m} outside the skeleton ({lo}, {hi})")

    def contains(self, other: Triangulation) -> bool:
        return set(other.marks) <= set(self.marks)


def log_rho(domain: Domain, tri: Triangulation) -> TropicalPL:
    """log_p of the radius of the biggest disc around a generic point avoiding the marks.

    Annulus: every mark sits on the skeleton, so the disc is ``|t - x| < |x|``
    whatever the marks are.  Disc: below the smallest mark ``m`` the disc is
    ``D(0, p^m)``; above it the point is on the skeleton of the triangulation.
    """
    tri.validate(domain)
    lo, hi = domain.skeleton
    if not domain.is_disc:
        return TropicalPL.identity(lo, hi)
    if not tri.marks:
        return TropicalPL.constant(domain.s0, lo, hi)
    m = tri.marks[0]
    return TropicalPL.identity(lo, hi).pointwise_max(TropicalPL.constant(m, lo, hi))


def log_rho_relative(domain: Domain, tri: Triangulation, finer: Triangulation) -> TropicalPL:
    """log_p rho_{S',S} = log rho_{S'} - log rho_S for a refinement ``S' >= S``."""
    if not finer.contains(tri):
        raise ValueError("S' must contain S")
    return log_rho(domain, finer) - log_rho(domain, tri)


@dataclass(frozen=True)
class DiffModule:
    prime: Prime
    G: Matrix
    domain: Domain

    def __post_init__(self):
        if not isinstance(self.prime, Prime):
            object.__setattr__(self, "prime", Prime(int(self.prime)))
        G = tuple(tuple(e if isinstance(e, LaurentPoly) else LaurentPoly.constant(e) for e in row)
                  for row in self.G)
        m = len(G)
        if m < 1 or any(len(row) != m for row in G):
            raise ValueError("G must be a non-empty square matrix")
        if self.domain.is_disc and any(e.has_negative_degree() for row in G for e in row):
            raise ValueError("pole inside disc: negative degrees need an annulus")
        object.__setattr__(self, "G", G)

    @property
    def rank(self) -> int:
        return len(self.G)

    @property
    def p(self) -> int:
        return self.prime.p


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    m = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(m)), LaurentPoly())
                       for j in range(m)) for i in range(m))


def _is_zero(A: Matrix) -> bool:
    return all(e.is_zero() for row in A for e in row)


def iterate(dm: DiffModule, N: int) -> list[Matrix]:
    """``[G_1, ..., G_N]``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    out = [dm.G]
    for _ in range(N - 1):
        Gn = out[-1]
        if _is_zero(Gn):
            out.append(Gn)
            continue
        prod = _matmul(Gn, dm.G)
        out.append(tuple(tuple(Gn[i][j].derive() + prod[i][j] for j in range(dm.rank))
                         for i in range(dm.rank)))
    return out


def matrix_norm_pl(A: Matrix, p, lo, hi) -> TropicalPL | None:
    """Entrywise max of the Gauss-norm PL functions; ``None`` for the zero matrix."""
    out = None
    for row in A:
        for e in row:
            if e.is_zero():
                continue
            f = gauss_norm_pl(e, p, lo, hi)
            out = f if out is None else out.pointwise_max(f)
    return out


def matrix_norm_log(A: Matrix, s, p):
    return max(gauss_norm_log(e, s, p) for row in A for e in row)


@dataclass(frozen=True)
class RadiusEstimate:
    """log_p R^emb along the skeleton at truncation order ``N``.

    ``provenance[i]`` lists which candidates realise piece ``i``: ``0`` stands
    for the cap, ``n >= 1`` for the term built from ``G_n``.
    """

    N: int
    domain: Domain
    on_skeleton: TropicalPL
    provenance: tuple[tuple[int, ...], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "order": self.N,
            "on_skeleton": self.on_skeleton.to_dict(),
            "provenance": [list(p) for p in self.provenance],
        }


def radius_terms(dm: DiffModule, N: int, Gs: Sequence[Matrix] | None = None) -> dict[int, TropicalPL]:
    """``{n: -(log|G_n| + v_p(n!))/n}`` for the nonzero ``G_n``, plus ``{0: cap}``."""
    lo, hi = dm.domain.skeleton
    Gs = iterate(dm, N) if Gs is None else Gs
    terms = {0: dm.domain.cap()}
    for n, Gn in enumerate(Gs, start=1):
        norm = matrix_norm_pl(Gn, dm.p, lo, hi)
        if norm is None:
            continue
        terms[n] = norm.shift(val_factorial(n, dm.p)).scale(Fraction(-1, n))
    return terms


def emb_radius_pl(dm: DiffModule, N: int, Gs: Sequence[Matrix] | None = None) -> RadiusEstimate:
    if N < 1:
        raise ValueError("N must be >= 1")
    terms = radius_terms(dm, N, Gs)
    est = None
    for f in terms.values():
        est = f if est is None else est.pointwise_min(f)
    prov = []
    for a, b, (sl, ic) in est.cells():
        mid = _mid(a, b)
        prov.append(tuple(n for n, f in terms.items() if f.piece_at(mid) == (sl, ic)))
    return RadiusEstimate(N, dm.domain, est, tuple(prov))


def _mid(a, b):
    if a == NEG_INF:
        return b - 1
    if b == INF:
        return a + 1
    return (a + b) / 2


def normalize(est: RadiusEstimate, tri: Triangulation) -> TropicalPL:
    """log_p R_S = min(log R^emb - log rho_S, 0)."""
    rho = log_rho(est.domain, tri)
    return (est.on_skeleton - rho).clamp_above(0)


def retriangulate(f: TropicalPL, rho: TropicalPL) -> TropicalPL:
    """log R_{S'} = min(log R_S - log rho_{S',S}, 0)."""
    return (f - rho).clamp_above(0)


def radius_log_at(dm: DiffModule, c, s, N: int, J: int = 8,
                  Gs: Sequence[Matrix] | None = None) -> tuple:
    """Certified ``(lower, upper)`` for log_p R^emb_N at ``eta_{c,p^s}``."""
    c, s = as_fraction(c), as_fraction(s)
    p = dm.p
    if not dm.domain.contains(c, s, p):
        raise ValueError("out of domain")
    cap = dm.domain.cap_at(c, s, p)
    Gs = iterate(dm, N) if Gs is None else Gs
    if c == 0 or s >= abs_log(c, p):
        if c and s > abs_log(c, p) and any(e.has_negative_degree() for row in dm.G for e in row):
            raise ValueError("pole inside disc")
        # eta_{c,p^s} = eta_{0,p^s}: exact skeleton evaluation
        value = cap
        for n, Gn in enumerate(Gs, start=1):
            if not _is_zero(Gn):
                value = min(value, -(matrix_norm_log(Gn, s, p) + val_factorial(n, p)) / Fraction(n))
        return value, value
    lower = upper = cap
    for n, Gn in enumerate(Gs, start=1):
        lo_n, hi_n = NEG_INF, NEG_INF
        for row in Gn:
            for e in row:
                if e.is_zero():
                    continue
                a, b = recenter_norm_log(e, c, s, p, J)
                lo_n, hi_n = max(lo_n, a), max(hi_n, b)
        if hi_n == NEG_INF:
            continue
        v = val_factorial(n, p)
        upper = min(upper, -(lo_n + v) / Fraction(n)) if lo_n != NEG_INF else upper
        lower = min(lower, -(hi_n + v) / Fraction(n))
    return lower, upper
