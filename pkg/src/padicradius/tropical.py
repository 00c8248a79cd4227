"""Exact one-variable piecewise-linear functions over Q.

A :class:`TropicalPL` lives on a closed interval ``[lo, hi]`` whose ends may
be infinite.  It is stored as a strictly increasing tuple of interior
breakpoints and one affine piece ``s -> slope*s + intercept`` per cell.
Values are always kept in canonical form: pieces are continuous at every
breakpoint and no breakpoint separates two pieces with the same slope.
There is no tolerance anywhere; crossings are solved over Q.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .padic import INF, NEG_INF, as_fraction, format_rational, parse_rational

Piece = tuple[Fraction, Fraction]


def _end(x):
    if x == INF or x == NEG_INF:
        return x
    return as_fraction(x)


def _parse_end(text: str):
    if text in ("inf", "+inf"):
        return INF
    if text == "-inf":
        return NEG_INF
    return parse_rational(text)


def _sample_point(a, b) -> Fraction:
    """A rational strictly inside (a, b)."""
    if a == NEG_INF and b == INF:
        return Fraction(0)
    if a == NEG_INF:
        return b - 1
    if b == INF:
        return a + 1
    return (a + b) / 2


def _at(piece: Piece, s) -> Fraction:
    return piece[0] * s + piece[1]


@dataclass(frozen=True)
class TropicalPL:
    lo: Fraction | float
    hi: Fraction | float
    breaks: tuple[Fraction, ...] = ()
    pieces: tuple[Piece, ...] = field(default=((Fraction(0), Fraction(0)),))

    def __post_init__(self):
        lo, hi = _end(self.lo), _end(self.hi)
        if not lo < hi:
            raise ValueError(f"empty domain [{lo}, {hi}]")
        breaks = tuple(as_fraction(b) for b in self.breaks)
        pieces = tuple((as_fraction(a), as_fraction(b)) for a, b in self.pieces)
        if len(pieces) != len(breaks) + 1:
            raise ValueError("need exactly one more piece than breakpoints")
        for i, b in enumerate(breaks):
            if not lo < b < hi:
                raise ValueError(f"breakpoint {b} not interior to the domain")
            if i and not breaks[i - 1] < b:
                raise ValueError("breakpoints must be strictly increasing")
            if _at(pieces[i], b) != _at(pieces[i + 1], b):
                raise ValueError(f"discontinuity at {b}")
        # canonical form: drop breakpoints between equal pieces
        kb, kp = [], [pieces[0]]
        for b, pc in zip(breaks, pieces[1:]):
            if pc == kp[-1]:
                continue
            kb.append(b)
            kp.append(pc)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "breaks", tuple(kb))
        object.__setattr__(self, "pieces", tuple(kp))

    # -- constructors -------------------------------------------------------

    @classmethod
    def affine(cls, slope, intercept, lo=NEG_INF, hi=INF) -> TropicalPL:
        return cls(lo, hi, (), ((as_fraction(slope), as_fraction(intercept)),))

    @classmethod
    def constant(cls, value, lo=NEG_INF, hi=INF) -> TropicalPL:
        return cls.affine(0, value, lo, hi)

    @classmethod
    def identity(cls, lo=NEG_INF, hi=INF) -> TropicalPL:
        return cls.affine(1, 0, lo, hi)

    @classmethod
    def from_points(cls, points: Sequence[tuple], lo=None, hi=None,
                    left_slope=None, right_slope=None) -> TropicalPL:
        """Interpolate ``(s, value)`` points; end slopes extend past the outer points."""
        pts = sorted((as_fraction(s), as_fraction(v)) for s, v in points)
        lo = pts[0][0] if lo is None else _end(lo)
        hi = pts[-1][0] if hi is None else _end(hi)
        if len(pts) == 1:
            (s0, v0), = pts
            slope = left_slope if left_slope is not None else right_slope
            if slope is None:
                slope = 0
            slope = as_fraction(slope)
            return cls.affine(slope, v0 - slope * s0, lo, hi)
        breaks, pieces = [], []
        if lo < pts[0][0]:
            if left_slope is None:
                raise ValueError("left_slope needed to extend below the first point")
            sl = as_fraction(left_slope)
            pieces.append((sl, pts[0][1] - sl * pts[0][0]))
            breaks.append(pts[0][0])
        for (s0, v0), (s1, v1) in zip(pts, pts[1:]):
            if s1 == s0:
                raise ValueError(f"duplicate abscissa {s0}")
            sl = (v1 - v0) / (s1 - s0)
            pieces.append((sl, v0 - sl * s0))
            breaks.append(s1)
        breaks.pop()
        if pts[-1][0] < hi:
            if right_slope is None:
                raise ValueError("right_slope needed to extend above the last point")
            sl = as_fraction(right_slope)
            pieces.append((sl, pts[-1][1] - sl * pts[-1][0]))
            breaks.append(pts[-1][0])
        return cls(lo, hi, tuple(breaks), tuple(pieces))

    # -- evaluation ---------------------------------------------------------

    def _piece_index(self, s) -> int:
        return bisect.bisect_left(self.breaks, s)

    def __call__(self, s) -> Fraction:
        s = as_fraction(s)
        if not self.lo <= s <= self.hi:
            raise ValueError(f"{s} out of domain [{self.lo}, {self.hi}]")
        return _at(self.pieces[self._piece_index(s)], s)

    eval = __call__

    def piece_at(self, s) -> Piece:
        """The affine piece on the cell containing ``s`` (left cell at a breakpoint)."""
        return self.pieces[self._piece_index(as_fraction(s))]

    def slopes(self) -> list[Fraction]:
        return [a for a, _ in self.pieces]

    def breakpoints(self) -> list[Fraction]:
        return list(self.breaks)

    def cells(self) -> list[tuple]:
        """``(left, right, piece)`` for every cell, left to right."""
        ends = [self.lo, *self.breaks, self.hi]
        return [(ends[i], ends[i + 1], pc) for i, pc in enumerate(self.pieces)]

    def is_concave(self) -> bool:
        sl = self.slopes()
        return all(a >= b for a, b in zip(sl, sl[1:]))

    def is_convex(self) -> bool:
        sl = self.slopes()
        return all(a <= b for a, b in zip(sl, sl[1:]))

    def nodes(self) -> list[tuple[Fraction, Fraction]]:
        """``(s, value)`` at finite domain ends and breakpoints."""
        xs = [x for x in (self.lo, *self.breaks, self.hi) if x not in (INF, NEG_INF)]
        return [(x, self(x)) for x in xs]

    # -- combinators --------------------------------------------------------

    def _check_domain(self, other: TropicalPL):
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise ValueError("incompatible domains")

    def _common_cells(self, other: TropicalPL):
        self._check_domain(other)
        ends = [self.lo, *sorted(set(self.breaks) | set(other.breaks)), self.hi]
        for a, b in zip(ends, ends[1:]):
            mid = _sample_point(a, b)
            yield a, b, self.pieces[self._piece_index(mid)], other.pieces[other._piece_index(mid)]

    def _extremum(self, other: TropicalPL, pick_min: bool) -> TropicalPL:
        segs: list[tuple] = []  # (left end, piece)
        for a, b, pf, pg in self._common_cells(other):
            if pf[0] == pg[0]:
                better = min(pf, pg, key=lambda pc: pc[1]) if pick_min else max(pf, pg, key=lambda pc: pc[1])
                segs.append((a, better))
                continue
            x = (pg[1] - pf[1]) / (pf[0] - pg[0])
            mid = _sample_point(a, b)
            f_lower_left = (pf[0] > pg[0])  # f below g to the left of the crossing
            if a < x < b:
                left, right = (pf, pg) if f_lower_left else (pg, pf)
                if not pick_min:
                    left, right = right, left
                segs.append((a, left))
                segs.append((x, right))
            else:
                f_below = _at(pf, mid) < _at(pg, mid)
                segs.append((a, pf if f_below == pick_min else pg))
        breaks = tuple(a for a, _ in segs[1:])
        return TropicalPL(self.lo, self.hi, breaks, tuple(pc for _, pc in segs))

    def pointwise_min(self, other: TropicalPL) -> TropicalPL:
        return self._extremum(other, True)

    def pointwise_max(self, other: TropicalPL) -> TropicalPL:
        return self._extremum(other, False)

    def affine_combine(self, other: TropicalPL, alpha, beta) -> TropicalPL:
        """``alpha*self + beta*other``."""
        alpha, beta = as_fraction(alpha), as_fraction(beta)
        segs = [(a, (alpha * pf[0] + beta * pg[0], alpha * pf[1] + beta * pg[1]))
                for a, _, pf, pg in self._common_cells(other)]
        return TropicalPL(self.lo, self.hi, tuple(a for a, _ in segs[1:]),
                          tuple(pc for _, pc in segs))

    def scale(self, alpha) -> TropicalPL:
        alpha = as_fraction(alpha)
        return TropicalPL(self.lo, self.hi, self.breaks,
                          tuple((alpha * a, alpha * b) for a, b in self.pieces))

    def shift(self, c) -> TropicalPL:
        """Add the constant ``c`` to the values."""
        c = as_fraction(c)
        return TropicalPL(self.lo, self.hi, self.breaks,
                          tuple((a, b + c) for a, b in self.pieces))

    def __add__(self, other: TropicalPL) -> TropicalPL:
        return self.affine_combine(other, 1, 1)

    def __sub__(self, other: TropicalPL) -> TropicalPL:
        return self.affine_combine(other, 1, -1)

    def __neg__(self) -> TropicalPL:
        return self.scale(-1)

    def clamp_above(self, c) -> TropicalPL:
        """``min(self, c)``."""
        return self.pointwise_min(TropicalPL.constant(c, self.lo, self.hi))

    def restrict(self, lo, hi) -> TropicalPL:
        lo, hi = _end(lo), _end(hi)
        if not (self.lo <= lo < hi <= self.hi):
            raise ValueError("restriction must be a subinterval")
        keep = [i for i, (a, b, _) in enumerate(self.cells()) if a < hi and b > lo]
        breaks = tuple(b for b in self.breaks if lo < b < hi)
        return TropicalPL(lo, hi, breaks, tuple(self.pieces[i] for i in keep))

    def reflect(self) -> TropicalPL:
        """``s -> f(-s)``: reverses the orientation of the segment."""
        return TropicalPL(-self.hi, -self.lo, tuple(-b for b in reversed(self.breaks)),
                          tuple((-a, b) for a, b in reversed(self.pieces)))

    # -- serialisation ------------------------------------------------------

    def to_dict(self) -> dict:
        pts = self.nodes()
        if not pts:
            pts = [(Fraction(0), self(0))]
        return {
            "domain": [format_rational(self.lo), format_rational(self.hi)],
            "points": [[format_rational(s), format_rational(v)] for s, v in pts],
            "left_slope": format_rational(self.pieces[0][0]),
            "right_slope": format_rational(self.pieces[-1][0]),
        }

    @classmethod
    def from_dict(cls, data: dict) -> TropicalPL:
        lo, hi = (_parse_end(x) for x in data["domain"])
        pts = [(parse_rational(s), parse_rational(v)) for s, v in data["points"]]
        return cls.from_points(pts, lo, hi, parse_rational(data["left_slope"]),
                               parse_rational(data["right_slope"]))

    def samples(self, count: int, lo=None, hi=None) -> list[tuple[Fraction, Fraction]]:
        """Evaluate on ``count`` equally spaced rational abscissae."""
        lo = self.lo if lo is None else as_fraction(lo)
        hi = self.hi if hi is None else as_fraction(hi)
        if lo in (INF, NEG_INF) or hi in (INF, NEG_INF):
            raise ValueError("sampling an unbounded domain needs finite lo/hi")
        if count < 2:
            return [(lo, self(lo))]
        step = (hi - lo) / (count - 1)
        return [(lo + i * step, self(lo + i * step)) for i in range(count)]

    def to_tsv(self, count: int, lo=None, hi=None) -> str:
        lines = ["s\tvalue\tvalue_decimal"]
        for s, v in self.samples(count, lo, hi):
            lines.append(f"{format_rational(s)}\t{format_rational(v)}\t{float(v):.12g}")
        return "\n".join(lines) + "\n"

    def __str__(self):
        parts = []
        for a, b, (sl, ic) in self.cells():
            parts.append(f"[{format_rational(a)}, {format_rational(b)}]: "
                         f"{format_rational(sl)}*s + {format_rational(ic)}")
        return "; ".join(parts)


def pointwise_min(f: TropicalPL, g: TropicalPL) -> TropicalPL:
    return f.pointwise_min(g)


def pointwise_max(f: TropicalPL, g: TropicalPL) -> TropicalPL:
    return f.pointwise_max(g)


def min_of(fs: Iterable[TropicalPL]) -> TropicalPL:
    it = iter(fs)
    out = next(it)
    for f in it:
        out = out.pointwise_min(f)
    return out


def max_of(fs: Iterable[TropicalPL]) -> TropicalPL:
    it = iter(fs)
    out = next(it)
    for f in it:
        out = out.pointwise_max(f)
    return out


def affine_combine(f: TropicalPL, g: TropicalPL, alpha, beta) -> TropicalPL:
    return f.affine_combine(g, alpha, beta)


@dataclass(frozen=True)
class SlopeReport:
    rank: int
    passed: bool
    # (cell index, slope, admissible) for every piece
    pieces: tuple[tuple[int, Fraction, bool], ...]

    @property
    def offending(self) -> list[tuple[int, Fraction]]:
        return [(i, sl) for i, sl, ok in self.pieces if not ok]


def certify_slopes(f: TropicalPL, rank: int) -> SlopeReport:
    """Check every slope is ``m/i`` with ``1 <= i <= rank``."""
    if rank < 1:
        raise ValueError("rank must be positive")
    rows = tuple((i, sl, sl.denominator <= rank) for i, sl in enumerate(f.slopes()))
    return SlopeReport(rank, all(ok for _, _, ok in rows), rows)
