"""Acceptance checks and the per-instance summary behind ``padicradius verify``.

Each ``criterion_*`` function is self-contained, returns a
``CriterionResult`` and never raises on a failed check.  The wall-clock
budget is part of the verdict.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from .diffmod import (
    Triangulation,
    emb_radius_pl,
    iterate,
    log_rho_relative,
    normalize,
    retriangulate,
)
from .graph import (
    Edge,
    GraphPL,
    MetrizedGraph,
    classify,
    direction_count_bound,
    dirichlet_solve,
    laplacian,
    pairing,
    star,
)
from .instances import (
    BUNDLED,
    EXP_ANNULUS,
    EXP_DISC,
    GAUSS_DISC,
    NILPOTENT_ANNULUS,
    SLOPE2_ANNULUS,
    TRIVIAL_ANNULUS,
    TRIVIAL_DISC,
    Instance,
)
from .padic import digit_sum, val_factorial
from .polygon import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    PolygonReport,
    assemble,
    borddisque_check,
    check_rho_map,
    check_superharmonic_logR,
    rho_maps_check,
)
from .tropical import TropicalPL, certify_slopes

F = Fraction


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] criterion {self.number:>2}: {self.title} "
                f"({self.seconds:.2f}s / {self.limit:g}s) {self.detail}")


class _Check:
    """Collects failed sub-checks; the first few are kept as the detail."""

    def __init__(self):
        self.failures: list[str] = []
        self.count = 0

    def __call__(self, ok: bool, what: str):
        self.count += 1
        if not ok:
            self.failures.append(what)

    def detail(self) -> str:
        if not self.failures:
            return f"{self.count} checks"
        head = "; ".join(self.failures[:3])
        more = f" (+{len(self.failures) - 3} more)" if len(self.failures) > 3 else ""
        return f"{len(self.failures)}/{self.count} failed: {head}{more}"


def _run(number: int, title: str, limit: float, body: Callable[[_Check], None]) -> CriterionResult:
    check = _Check()
    t0 = time.perf_counter()
    try:
        body(check)
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        check(False, f"raised {type(exc).__name__}: {exc}")
    dt = time.perf_counter() - t0
    check(dt <= limit, f"over budget: {dt:.2f}s > {limit:g}s")
    return CriterionResult(number, title, not check.failures, check.detail(), dt, limit)


def _report(inst: Instance, probes: bool = True) -> PolygonReport:
    return assemble(inst.module, inst.triangulation, inst.order,
                    inst.probes if probes else (), inst.tail)


# -- 1 ----------------------------------------------------------------------

def _legendre_min(N: int, p: int) -> Fraction:
    return min(F(-(n - digit_sum(n, p)), (p - 1) * n) for n in range(1, N + 1))


def criterion_1() -> CriterionResult:
    def body(ok):
        dm = EXP_ANNULUS.module
        lo, hi = dm.domain.skeleton
        est = emb_radius_pl(dm, 64).on_skeleton
        want = TropicalPL.identity(lo, hi).pointwise_min(TropicalPL.constant(F(-63, 64), lo, hi))
        ok(est == want, f"N=64 polygon {est} != min(s, -63/64)")
        Gs = iterate(dm, 128)
        ok(emb_radius_pl(dm, 128, Gs).on_skeleton(hi) == F(-127, 128), "N=128 constant piece")
        prev = None
        for k in range(1, 8):
            N = 2**k
            c = emb_radius_pl(dm, N, Gs[:N]).on_skeleton(hi)
            ok(c == F(-(2**k - 1), 2**k), f"N={N}: constant piece {c}")
            ok(c == _legendre_min(N, 2), f"N={N}: Legendre oracle")
            ok(c > -1 and (prev is None or c < prev), f"N={N}: not decreasing towards -1")
            prev = c
    return _run(1, "exponential instance min(s, -63/64)", 5, body)


# -- 2 ----------------------------------------------------------------------

def criterion_2() -> CriterionResult:
    def body(ok):
        dm = SLOPE2_ANNULUS.module
        Gs = iterate(dm, 81)
        for n, Gn in enumerate(Gs, start=1):
            e = Gn[0][0]
            ok(e.min_degree() == -2 * n and e.coeffs[-2 * n] == 1, f"G_{n} lowest term")
        cN = max(F(val_factorial(n, 3), n) for n in range(1, 82))
        ok(cN == F(40, 81), f"c_N = {cN}")
        rep = _report(SLOPE2_ANNULUS)
        est = rep.estimate.on_skeleton
        ok(2 in est.slopes(), f"embedded slopes {est.slopes()}")
        ok(est.piece_at(est.lo) == (2, -cN), f"slope-2 piece {est.piece_at(est.lo)}")
        ok(certify_slopes(est, 1).passed and rep.slopes.passed, "slope certification, rank 1")
        ok(rep.concavity.status == PASS and est.is_concave(), "concavity")
    return _run(2, "slope-2 instance, piece 2s - 40/81", 30, body)


# -- 3 ----------------------------------------------------------------------

def criterion_3() -> CriterionResult:
    def body(ok):
        for inst in (TRIVIAL_ANNULUS, NILPOTENT_ANNULUS):
            dm = inst.module
            lo, hi = dm.domain.skeleton
            Gs = iterate(dm, inst.order)
            ok(all(e.is_zero() for Gn in Gs[1:] for row in Gn for e in row), f"{inst.name}: G_n, n >= 2")
            est = emb_radius_pl(dm, inst.order, Gs)
            for marks in ((), (F(-1),), (F(-3, 2), F(-1, 2))):
                f = normalize(est, Triangulation(marks))
                ok(f == TropicalPL.constant(0, lo, hi), f"{inst.name}: R_S != 1 for marks {marks}")
    return _run(3, "trivial and nilpotent instances, R_S = 1", 1, body)


# -- 4 ----------------------------------------------------------------------

def _continuous(f: TropicalPL) -> bool:
    for b, (a1, b1), (a2, b2) in zip(f.breaks, f.pieces, f.pieces[1:]):
        if a1 * b + b1 != a2 * b + b2 or a1 == a2:
            return False
    return True


def criterion_4() -> CriterionResult:
    def body(ok):
        for inst in BUNDLED:
            rep = _report(inst, probes=False)
            for label, f in (("embedded", rep.estimate.on_skeleton), ("normalized", rep.normalized)):
                ok(_continuous(f), f"{inst.name}: {label} not continuous")
                ok(certify_slopes(f, inst.module.rank).passed, f"{inst.name}: {label} slope denominators")
            ok(rep.concavity.status in (PASS, INCONCLUSIVE), f"{inst.name}: {rep.concavity.detail}")
            if rep.concavity.status == INCONCLUSIVE:
                ok("removed at order" in rep.concavity.detail, f"{inst.name}: {rep.concavity.detail}")
    return _run(4, "continuity, concavity, slope denominators on every bundled instance", 60, body)


# -- 5 ----------------------------------------------------------------------

def random_graph(rng: random.Random, max_vertices: int = 8) -> MetrizedGraph:
    """Connected graph with symmetric edge weights and at least one boundary vertex."""
    n = rng.randint(2, max_vertices)
    names = [f"v{i}" for i in range(n)]
    lengths = [F(1, 3), F(1, 2), F(1), F(3, 2), F(2), F(5, 2)]
    pairs = [(names[rng.randrange(i)], names[i]) for i in range(1, n)]
    for _ in range(rng.randint(0, n)):
        u, v = rng.sample(names, 2)
        if (u, v) not in pairs and (v, u) not in pairs:
            pairs.append((u, v))
    edges = []
    for u, v in pairs:
        w = rng.randint(1, 3)
        edges.append(Edge(u, v, rng.choice(lengths), w, w))
    boundary = rng.sample(names, rng.randint(1, max(1, n // 2)))
    return MetrizedGraph(tuple(names), tuple(edges), frozenset(boundary))


def random_pl(rng: random.Random, g: MetrizedGraph) -> GraphPL:
    values = {v: F(rng.randint(-6, 6), rng.randint(1, 3)) for v in g.vertices}
    breaks = {}
    for i, e in enumerate(g.edges):
        k = rng.randint(0, 2)
        pos = sorted({e.length * F(rng.randint(1, 7), 8) for _ in range(k)})
        breaks[i] = [(x, F(rng.randint(-6, 6), rng.randint(1, 3))) for x in pos]
    return GraphPL.make(g, values, breaks)


def criterion_5(count: int = 200, seed: int = 20240917) -> CriterionResult:
    def body(ok):
        rng = random.Random(seed)
        for t in range(count):
            g = random_graph(rng)
            f, h = random_pl(rng, g), random_pl(rng, g)
            ok(laplacian(g, f).total() == 0, f"case {t}: total mass")
            ok(pairing(g, f, h) == pairing(g, h, f), f"case {t}: pairing symmetry")
            bvals = {v: F(rng.randint(-9, 9), rng.randint(1, 4)) for v in g.boundary}
            u = dirichlet_solve(g, bvals)
            ok(classify(g, u) == "harmonic", f"case {t}: Dirichlet solution not harmonic")
            lo, hi = min(bvals.values()), max(bvals.values())
            ok(all(lo <= u.value(v) <= hi for v in g.vertices), f"case {t}: maximum principle")
        three = MetrizedGraph(("x", "a", "b", "c"),
                              (Edge("x", "a", 1), Edge("x", "b", 1), Edge("x", "c", 1)),
                              frozenset("abc"))
        ok(dirichlet_solve(three, {"a": 0, "b": 0, "c": 3}).value("x") == 1, "star centre 1")
        weighted = MetrizedGraph(three.vertices,
                                 (Edge("x", "a", 1), Edge("x", "b", 1), Edge("x", "c", 1, 2, 2)),
                                 three.boundary)
        ok(dirichlet_solve(weighted, {"a": 0, "b": 0, "c": 3}).value("x") == F(3, 2), "star centre 3/2")
    return _run(5, "potential-theory kernel on 200 random graphs", 30, body)


# -- 6 ----------------------------------------------------------------------

def slope_grid(m: Fraction, top: Fraction, max_den: int = 4) -> list[Fraction]:
    return sorted({F(k, d) for d in range(1, max_den + 1)
                   for k in range(1, int(top * d) + 1) if m <= F(k, d) <= top})


def criterion_6() -> CriterionResult:
    def body(ok):
        p1, p2, m = F(-2), F(0), F(1, 2)
        ok(direction_count_bound(p1, p2, m) == 4, "bound(-2, 0, 1/2) != 4")
        grid = slope_grid(m, F(2))
        for k in range(1, 7):
            sh = [offs for offs in itertools.combinations_with_replacement(grid, k)
                  if classify(*star((p1, p2), offs)) in ("harmonic", "superharmonic")]
            if k <= 4:
                ok((m,) * k in sh, f"{k} directions of slope 1/2 not attainable")
            else:
                ok(not sh, f"{k} directions classified super-harmonic: {sh[:1]}")
    return _run(6, "direction-count bound at slopes (-2, 0), m = 1/2", 30, body)


# -- 7 ----------------------------------------------------------------------

def criterion_7() -> CriterionResult:
    def body(ok):
        for inst in (EXP_ANNULUS, SLOPE2_ANNULUS, TRIVIAL_ANNULUS, NILPOTENT_ANNULUS):
            rep = _report(inst)
            ok(len(rep.probes) == len(inst.probes), f"{inst.name}: probes missing")
            v = check_superharmonic_logR(rep)
            ok(v.status == PASS, f"{inst.name}: {v.detail}")
        # harness self-test: a convex kink must be caught
        rep = _report(EXP_ANNULUS, probes=False)
        flipped = replace(rep, normalized=-rep.normalized)
        ok(check_superharmonic_logR(flipped).status == FAIL, "negated polygon not rejected")
    return _run(7, "log R is super-harmonic on skeleton plus probe stubs", 10, body)


# -- 8 ----------------------------------------------------------------------

def criterion_8() -> CriterionResult:
    def body(ok):
        for inst in (EXP_DISC, TRIVIAL_DISC):
            v = borddisque_check(inst.module, inst.order)
            ok(v.status == PASS, f"{inst.name}: {v.detail}")
        v = borddisque_check(GAUSS_DISC.module, GAUSS_DISC.order, reverse=True)
        ok(v.status == FAIL, "reversed orientation not rejected")
    return _run(8, "centre-to-boundary slopes on discs", 5, body)


# -- 9 ----------------------------------------------------------------------

def _bounded_by_zero(g: TropicalPL) -> bool:
    pts = [*g.nodes(), *((x, g(x)) for x in (g.lo, g.hi) if abs(x) != float("inf"))]
    if g.lo == float("-inf") and g.slopes()[0] < 0:
        return False
    if g.hi == float("inf") and g.slopes()[-1] > 0:
        return False
    return all(y <= 0 for _, y in pts)


def criterion_9() -> CriterionResult:
    def body(ok):
        grid = [F(k, 4) for k in range(-7, 0)]
        for inst in (EXP_DISC, EXP_ANNULUS):
            dom = inst.module.domain
            est = emb_radius_pl(inst.module, inst.order)
            for base in ((), (F(-1),)):
                tri = Triangulation(base)
                f = normalize(est, tri)
                extra = [x for x in grid if x not in base]
                for k in (1, 2, 3):
                    for add in itertools.combinations(extra, k):
                        finer = Triangulation(base + add)
                        v = rho_maps_check(dom, tri, finer)
                        ok(v.status == PASS, f"{dom.kind} {base}+{add}: {v.detail}")
                        rho = log_rho_relative(dom, tri, finer)
                        g = retriangulate(f, rho)
                        ok(_bounded_by_zero(g), f"{dom.kind} {base}+{add}: retriangulated radius above 0")
                        ok(g == normalize(est, finer), f"{dom.kind} {base}+{add}: R_S' mismatch")
        bad = TropicalPL.affine(2, 0, -2, 0)
        ok(check_rho_map(bad, Triangulation()).status == FAIL, "slope-2 map not rejected")
    return _run(9, "rho maps have slopes in {-1, 0, 1} and vanish on S", 5, body)


# -- 10 ---------------------------------------------------------------------

def criterion_10() -> CriterionResult:
    def body(ok):
        rep = _report(EXP_ANNULUS)
        ok([pr.c for pr in rep.probes] == [1, 3, 5], "probe set")
        for pr in rep.probes:
            ok(pr.s == pr.branch_s - 1, f"c={pr.c}: s is not one step below the branch")
            want = rep.estimate.on_skeleton(pr.branch_s)
            ok(pr.lower == pr.upper == want, f"c={pr.c}: [{pr.lower}, {pr.upper}] vs {want}")
            ok(pr.verdict == PASS, f"c={pr.c}: verdict {pr.verdict}")
        ok(rep.constancy.status == PASS, rep.constancy.detail)
    return _run(10, "off-skeleton probes at c = 1, 3, 5 match the skeleton", 10, body)


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
)


# -- per-instance summary ---------------------------------------------------

@dataclass(frozen=True)
class InstanceRow:
    name: str
    order: int
    breakpoints: int
    concavity: str
    slopes: str
    branches: str
    superharmonic: str
    disc: str

    @property
    def passed(self) -> bool:
        return (self.concavity in (PASS, INCONCLUSIVE) and self.slopes == PASS
                and self.branches == PASS and self.superharmonic == PASS
                and self.disc in (PASS, "-"))


def instance_row(inst: Instance) -> InstanceRow:
    rep = _report(inst)
    stubs = {(pr.c, pr.s) for pr in rep.probes if pr.verdict == FAIL}
    undecided = [pr for pr in rep.probes if pr.verdict == INCONCLUSIVE]
    if undecided:
        branches = INCONCLUSIVE
    else:
        branches = PASS if stubs == set(inst.expected_stubs) else FAIL
    disc = "-"
    if inst.module.domain.is_disc:
        disc = borddisque_check(inst.module, inst.order).status
    return InstanceRow(inst.name, inst.order, len(rep.breakpoints), rep.concavity.status,
                       PASS if rep.slopes.passed else FAIL, branches,
                       rep.superharmonic.status, disc)


def format_table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def instance_table(rows: list[InstanceRow]) -> str:
    head = ["instance", "N", "breaks", "concave", "slopes", "branches", "superharm", "disc", "result"]
    body = [[r.name, str(r.order), str(r.breakpoints), r.concavity, r.slopes, r.branches,
             r.superharmonic, r.disc, PASS if r.passed else FAIL] for r in rows]
    return format_table([head, *body])


def run_all(criteria=CRITERIA, instances=BUNDLED):
    results = [c() for c in criteria]
    rows = [instance_row(inst) for inst in instances]
    return results, rows

