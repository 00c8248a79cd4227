"""Discrete potential theory on finite metrized graphs.

Sign convention: the outgoing slope at a point is positive when the
function increases away from the point.  The Laplacian of a PL function
puts at every point the weighted sum of its outgoing slopes, so concave
kinks carry negative mass and super-harmonic means every interior mass is
``<= 0``.

Edges carry one weight per end.  Interior points of an edge see the same
weight in both directions, which forces the two end weights to agree as
soon as the function breaks inside the edge.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .padic import as_fraction, format_rational
from .tropical import TropicalPL

EdgePoint = tuple[int, Fraction]  # (edge index, distance from edge.u)
Location = Union[str, EdgePoint]


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    length: Fraction
    weight_u: int = 1
    weight_v: int = 1

    def __post_init__(self):
        object.__setattr__(self, "length", as_fraction(self.length))
        if self.length <= 0:
            raise ValueError("edge lengths must be positive")
        if self.u == self.v:
            raise ValueError("loops are not supported")
        for w in (self.weight_u, self.weight_v):
            if not isinstance(w, int) or w < 1:
                raise ValueError("direction weights must be positive integers")

    def weight_at(self, vertex: str) -> int:
        return self.weight_u if vertex == self.u else self.weight_v


@dataclass(frozen=True)
class MetrizedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    boundary: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "boundary", frozenset(self.boundary))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        known = set(self.vertices)
        for e in self.edges:
            if e.u not in known or e.v not in known:
                raise ValueError(f"edge {e.u}-{e.v} uses an unknown vertex")
        if not self.boundary <= known:
            raise ValueError("boundary vertices must be vertices")

    def incident(self, vertex: str) -> list[tuple[int, bool]]:
        """``(edge index, vertex is the u end)`` for every edge at ``vertex``."""
        return [(i, e.u == vertex) for i, e in enumerate(self.edges) if vertex in (e.u, e.v)]

    def components(self) -> list[set[str]]:
        adj = defaultdict(set)
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        seen, out = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            comp, todo = set(), deque([v])
            while todo:
                x = todo.popleft()
                if x in comp:
                    continue
                comp.add(x)
                todo.extend(adj[x] - comp)
            seen |= comp
            out.append(comp)
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


@dataclass(frozen=True)
class GraphPL:
    """Continuous PL function: vertex values plus interior breakpoints per edge."""

    values: tuple[tuple[str, Fraction], ...]
    edge_breaks: tuple[tuple[tuple[Fraction, Fraction], ...], ...]

    @classmethod
    def make(cls, g: MetrizedGraph, values: Mapping[str, object],
             edge_breaks: Mapping[int, list] | None = None) -> GraphPL:
        vals = {v: as_fraction(values[v]) for v in g.vertices}
        edge_breaks = edge_breaks or {}
        fns = []
        for i, e in enumerate(g.edges):
            pts = [(Fraction(0), vals[e.u]), (e.length, vals[e.v])]
            for pos, val in edge_breaks.get(i, ()):
                pos = as_fraction(pos)
                if not 0 < pos < e.length:
                    raise ValueError(f"breakpoint {pos} not inside edge {i}")
                pts.append((pos, as_fraction(val)))
            fns.append(TropicalPL.from_points(pts))
        return cls.from_edge_functions(g, vals, fns)

    @classmethod
    def from_edge_functions(cls, g: MetrizedGraph, values: Mapping[str, object],
                            fns: list[TropicalPL]) -> GraphPL:
        vals = {v: as_fraction(values[v]) for v in g.vertices}
        breaks = []
        for e, f in zip(g.edges, fns):
            if (f.lo, f.hi) != (0, e.length) or f(0) != vals[e.u] or f(e.length) != vals[e.v]:
                raise ValueError("edge function does not match the vertex values")
            breaks.append(tuple((b, f(b)) for b in f.breaks))
        return cls(tuple(sorted(vals.items())), tuple(breaks))

    def value(self, vertex: str) -> Fraction:
        return dict(self.values)[vertex]

    def edge_function(self, g: MetrizedGraph, i: int) -> TropicalPL:
        e = g.edges[i]
        vals = dict(self.values)
        pts = [(Fraction(0), vals[e.u]), *self.edge_breaks[i], (e.length, vals[e.v])]
        return TropicalPL.from_points(pts)

    def at(self, g: MetrizedGraph, loc: Location) -> Fraction:
        if isinstance(loc, str):
            return self.value(loc)
        i, pos = loc
        return self.edge_function(g, i)(pos)


@dataclass(frozen=True)
class PointMeasure:
    """Finite signed measure; zero masses are dropped."""

    masses: tuple[tuple[Location, Fraction], ...]

    @classmethod
    def from_dict(cls, d: Mapping[Location, Fraction]) -> PointMeasure:
        items = [(loc, as_fraction(m)) for loc, m in d.items() if m != 0]
        items.sort(key=lambda lm: _loc_key(lm[0]))
        return cls(tuple(items))

    def as_dict(self) -> dict:
        return dict(self.masses)

    def total(self) -> Fraction:
        return sum((m for _, m in self.masses), Fraction(0))

    def mass_at(self, loc: Location) -> Fraction:
        return self.as_dict().get(loc, Fraction(0))

    def to_tsv(self) -> str:
        lines = ["location\tmass"]
        lines += [f"{format_location(loc)}\t{format_rational(m)}" for loc, m in self.masses]
        return "\n".join(lines) + "\n"


def _loc_key(loc: Location):
    return (0, loc, 0) if isinstance(loc, str) else (1, str(loc[0]).zfill(9), loc[1])


def format_location(loc: Location) -> str:
    if isinstance(loc, str):
        return loc
    return f"e{loc[0]}@{format_rational(loc[1])}"


def laplacian(g: MetrizedGraph, f: GraphPL) -> PointMeasure:
    """dd^c f: weighted sum of outgoing slopes at vertices and edge breakpoints."""
    mass: dict[Location, Fraction] = defaultdict(Fraction)
    for i, e in enumerate(g.edges):
        fe = f.edge_function(g, i)
        sl = fe.slopes()
        mass[e.u] += e.weight_u * sl[0]
        mass[e.v] += e.weight_v * -sl[-1]
        if fe.breaks and e.weight_u != e.weight_v:
            raise ValueError(f"edge {i} breaks inside but has unequal end weights")
        for b, left, right in zip(fe.breaks, sl, sl[1:]):
            mass[(i, b)] += e.weight_u * (right - left)
    for v in g.vertices:
        mass.setdefault(v, Fraction(0))
    return PointMeasure.from_dict(mass)


HARMONIC = "harmonic"
SUPERHARMONIC = "superharmonic"
SUBHARMONIC = "subharmonic"
NEITHER = "neither"


def classify(g: MetrizedGraph, f: GraphPL, interior_only: bool = True) -> str:
    masses = [m for loc, m in laplacian(g, f).masses
              if not (interior_only and isinstance(loc, str) and loc in g.boundary)]
    if all(m == 0 for m in masses):
        return HARMONIC
    if all(m <= 0 for m in masses):
        return SUPERHARMONIC
    if all(m >= 0 for m in masses):
        return SUBHARMONIC
    return NEITHER


def is_superharmonic(g: MetrizedGraph, f: GraphPL, interior_only: bool = True) -> bool:
    return classify(g, f, interior_only) in (HARMONIC, SUPERHARMONIC)


def solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over Q for a square nonsingular system."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                k = M[r][col]
                M[r] = [x - k * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def dirichlet_solve(g: MetrizedGraph, boundary_values: Mapping[str, object]) -> GraphPL:
    """The function linear on edges, equal to the data on the boundary, harmonic inside."""
    for comp in g.components():
        if not comp & g.boundary:
            raise ValueError("ill-posed Dirichlet problem: a component has no boundary vertex")
    missing = g.boundary - set(boundary_values)
    if missing:
        raise ValueError(f"no boundary value for {sorted(missing)}")
    known = {v: as_fraction(boundary_values[v]) for v in g.boundary}
    unknown = [v for v in g.vertices if v not in g.boundary]
    idx = {v: i for i, v in enumerate(unknown)}
    A = [[Fraction(0)] * len(unknown) for _ in unknown]
    rhs = [Fraction(0)] * len(unknown)
    for v in unknown:
        r = idx[v]
        for i, at_u in g.incident(v):
            e = g.edges[i]
            w = e.v if at_u else e.u
            cond = Fraction(e.weight_at(v)) / e.length
            A[r][r] -= cond
            if w in idx:
                A[r][idx[w]] += cond
            else:
                rhs[r] -= cond * known[w]
    sol = solve_exact(A, rhs) if unknown else []
    values = dict(known)
    values.update(zip(unknown, sol))
    return GraphPL.make(g, values)


def pairing(g: MetrizedGraph, f: GraphPL, h: GraphPL) -> Fraction:
    """<dd^c f, h>."""
    return sum((m * h.at(g, loc) for loc, m in laplacian(g, f).masses), Fraction(0))


def graph_min(g: MetrizedGraph, f: GraphPL, h: GraphPL) -> GraphPL:
    """Pointwise min, with edge crossings added as breakpoints."""
    vals = {v: min(f.value(v), h.value(v)) for v in g.vertices}
    fns = [f.edge_function(g, i).pointwise_min(h.edge_function(g, i)) for i in range(len(g.edges))]
    return GraphPL.from_edge_functions(g, vals, fns)


def direction_count_bound(p1, p2, m) -> int:
    """Most directions of slope >= m a super-harmonic point with skeleton slopes p1, p2 admits."""
    p1, p2, m = as_fraction(p1), as_fraction(p2), as_fraction(m)
    if m <= 0:
        raise ValueError("invalid slope threshold")
    return math.floor(max(Fraction(0), -(p1 + p2) / m))


def star(skeleton_slopes, off_slopes, length=1) -> tuple[MetrizedGraph, GraphPL]:
    """Star centred at ``x`` with prescribed outgoing slopes; leaves are boundary."""
    length = as_fraction(length)
    slopes = [*skeleton_slopes, *off_slopes]
    leaves = [f"v{i}" for i in range(len(slopes))]
    g = MetrizedGraph(("x", *leaves), tuple(Edge("x", leaf, length) for leaf in leaves),
                      frozenset(leaves))
    values = {"x": Fraction(0)}
    values.update({leaf: as_fraction(sl) * length for leaf, sl in zip(leaves, slopes)})
    return g, GraphPL.make(g, values)
