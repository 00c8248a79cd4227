"""Convergence polygon assembly and certification.

Every verdict is one of ``pass``, ``fail`` or ``inconclusive`` and carries
the exact rationals that justify it.  Statements about branches off the
skeleton are limited to the probed branches: a clean report reads "no
non-constancy detected on probed branches at order N", never "constant
off the graph".
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .diffmod import (
    DiffModule,
    Domain,
    RadiusEstimate,
    Triangulation,
    emb_radius_pl,
    iterate,
    log_rho,
    log_rho_relative,
    normalize,
    radius_log_at,
)
from .graph import Edge, GraphPL, MetrizedGraph, classify, laplacian
from .padic import NEG_INF, abs_log, as_fraction, format_rational
from .tropical import SlopeReport, TropicalPL, certify_slopes

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

ORIENTATION = ("skeleton parametrised by s = log_p r, increasing; "
               "on a disc this runs from the centre to the boundary")


@dataclass(frozen=True)
class Verdict:
    status: str
    detail: str = ""
    witness: tuple = ()

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {"status": self.status, "detail": self.detail,
                "witness": [_fmt(w) for w in self.witness]}


def _fmt(x):
    if isinstance(x, (Fraction, int)) or x in (float("inf"), NEG_INF):
        return format_rational(x)
    if isinstance(x, tuple):
        return [_fmt(y) for y in x]
    return str(x)


@dataclass(frozen=True)
class Probe:
    c: Fraction
    s: Fraction
    branch_s: Fraction      # where the branch disc meets the skeleton
    lower: Fraction
    upper: Fraction
    predicted: Fraction     # skeleton value at the branch point
    verdict: str

    def to_dict(self) -> dict:
        return {k: (v if isinstance(v, str) else format_rational(v))
                for k, v in self.__dict__.items()}


@dataclass(frozen=True)
class PolygonReport:
    prime: int
    rank: int
    estimate: RadiusEstimate
    triangulation: Triangulation
    normalized: TropicalPL
    concavity: Verdict
    slopes: SlopeReport
    probes: tuple[Probe, ...] = ()
    stubs: tuple[Probe, ...] = ()       # probes where non-constancy was detected
    superharmonic: Verdict = field(default=Verdict(INCONCLUSIVE, "not checked"))

    @property
    def domain(self) -> Domain:
        return self.estimate.domain

    @property
    def breakpoints(self) -> list[Fraction]:
        return self.normalized.breakpoints()

    @property
    def constancy(self) -> Verdict:
        if any(pr.verdict == FAIL for pr in self.probes):
            return Verdict(FAIL, "non-constancy detected on a probed branch",
                           tuple((pr.c, pr.s) for pr in self.stubs))
        if any(pr.verdict == INCONCLUSIVE for pr in self.probes):
            return Verdict(INCONCLUSIVE, f"bounds too wide at order {self.estimate.N}")
        return Verdict(PASS, f"no non-constancy detected on probed branches at order {self.estimate.N}")

    def to_dict(self) -> dict:
        lo, hi = self.domain.skeleton
        return {
            "orientation": ORIENTATION,
            "prime": self.prime,
            "rank": self.rank,
            "domain": {"kind": self.domain.kind, "skeleton": [format_rational(lo), format_rational(hi)]},
            "triangulation": [format_rational(m) for m in self.triangulation.marks],
            "order": self.estimate.N,
            "embedded": self.estimate.to_dict(),
            "normalized": self.normalized.to_dict(),
            "breakpoints": [format_rational(b) for b in self.breakpoints],
            "concavity": self.concavity.to_dict(),
            "slopes": {
                "rank": self.slopes.rank,
                "status": PASS if self.slopes.passed else FAIL,
                "pieces": [[i, format_rational(sl), ok] for i, sl, ok in self.slopes.pieces],
            },
            "probes": [pr.to_dict() for pr in self.probes],
            "constancy": self.constancy.to_dict(),
            "controlling_graph": {
                "skeleton": [format_rational(lo), format_rational(hi)],
                "stubs": [[format_rational(pr.c), format_rational(pr.s)] for pr in self.stubs],
                "note": "lower approximation: only probed branches are represented",
            },
            "superharmonic": self.superharmonic.to_dict(),
        }


def _concavity_witness(f: TropicalPL):
    sl = f.slopes()
    for i, (a, b) in enumerate(zip(sl, sl[1:])):
        if b > a:
            return (f.breaks[i], a, b)
    return None


def concavity_verdict(dm: DiffModule, est: RadiusEstimate, tri: Triangulation) -> Verdict:
    """Concavity of the embedded and normalised polygons; a kink that disappears at 2N is inconclusive."""
    bad = _concavity_witness(est.on_skeleton) or _concavity_witness(normalize(est, tri))
    if bad is None:
        return Verdict(PASS, "concave on the skeleton segment")
    est2 = emb_radius_pl(dm, 2 * est.N)
    bad2 = _concavity_witness(est2.on_skeleton) or _concavity_witness(normalize(est2, tri))
    if bad2 is None:
        return Verdict(INCONCLUSIVE, f"convex kink at order {est.N} removed at order {2 * est.N}", bad)
    return Verdict(FAIL, f"convex kink persists at order {2 * est.N}", bad2)


def _probe(dm: DiffModule, est: RadiusEstimate, c, s, N, J, Gs, recheck: bool = True) -> Probe:
    """Compare the radius at ``eta_{c,p^s}`` with the skeleton value where its branch leaves.

    A mismatch is rechecked at order ``2N``; if it vanishes there the
    probe is inconclusive rather than a detection.
    """
    c, s = as_fraction(c), as_fraction(s)
    p = dm.p
    branch = as_fraction(abs_log(c, p)) if c else s
    if s >= branch:
        branch = s
    lower, upper = radius_log_at(dm, c, s, N, J, Gs)
    predicted = est.on_skeleton(branch)
    if lower == upper == predicted:
        verdict = PASS
    elif predicted < lower or predicted > upper:
        verdict = FAIL
        if recheck:
            Gs2 = iterate(dm, 2 * N)
            lo2, hi2 = radius_log_at(dm, c, s, 2 * N, J, Gs2)
            pred2 = emb_radius_pl(dm, 2 * N, Gs2).on_skeleton(branch)
            if lo2 <= pred2 <= hi2:
                verdict = INCONCLUSIVE
    else:
        verdict = INCONCLUSIVE
    return Probe(c, s, branch, lower, upper, predicted, verdict)


def assemble(dm: DiffModule, tri: Triangulation | None = None, N: int = 64,
             probes: Sequence[tuple] = (), J: int = 8, recheck: bool = True) -> PolygonReport:
    tri = tri or Triangulation()
    tri.validate(dm.domain)
    Gs = iterate(dm, N)
    est = emb_radius_pl(dm, N, Gs)
    normalized = normalize(est, tri)
    found = tuple(_probe(dm, est, c, s, N, J, Gs, recheck) for c, s in probes)
    report = PolygonReport(
        prime=dm.p,
        rank=dm.rank,
        estimate=est,
        triangulation=tri,
        normalized=normalized,
        concavity=concavity_verdict(dm, est, tri),
        slopes=certify_slopes(normalized, dm.rank),
        probes=found,
        stubs=tuple(pr for pr in found if pr.verdict == FAIL),
    )
    exact = all(pr.lower == pr.upper for pr in found)
    sh = check_superharmonic_logR(report) if exact else Verdict(
        INCONCLUSIVE, "probe bounds not exact; stub slopes unavailable")
    return replace(report, superharmonic=sh)


def embed_report(report: PolygonReport) -> tuple[MetrizedGraph, GraphPL]:
    """Path graph along the skeleton plus one stub per off-skeleton probe.

    The skeleton ends and the stub tips are boundary vertices.  An infinite
    skeleton end (disc centre) is cut one unit left of every feature.
    """
    f = report.normalized
    lo, hi = f.lo, f.hi
    rho = log_rho(report.domain, report.triangulation)
    stubs = [pr for pr in report.probes if pr.s < pr.branch_s]
    for pr in stubs:
        if pr.lower != pr.upper:
            raise ValueError("incomplete embedding: probe bounds are not exact")
    if lo == NEG_INF:
        feats = [*f.breaks, *(pr.branch_s for pr in stubs), hi]
        lo = min(feats) - 1
        f = f.restrict(lo, hi)
    attach = sorted({pr.branch_s for pr in stubs if lo < pr.branch_s < hi})
    names = {s: f"s={format_rational(s)}" for s in (lo, *attach, hi)}
    cuts = [lo, *attach, hi]
    vertices = [names[s] for s in cuts]
    values = {names[s]: f(s) for s in cuts}
    edges, breaks = [], {}
    for i, (a, b) in enumerate(zip(cuts, cuts[1:])):
        edges.append(Edge(names[a], names[b], b - a))
        breaks[i] = [(x - a, f(x)) for x in f.breaks if a < x < b]
    for k, pr in enumerate(stubs):
        tip = f"probe{k}:c={format_rational(pr.c)},s={format_rational(pr.s)}"
        vertices.append(tip)
        values[tip] = min(pr.lower - rho(pr.branch_s), Fraction(0))
        edges.append(Edge(names[pr.branch_s], tip, pr.branch_s - pr.s))
    boundary = {names[lo], names[hi], *(v for v in vertices if v.startswith("probe"))}
    g = MetrizedGraph(tuple(vertices), tuple(edges), frozenset(boundary))
    return g, GraphPL.make(g, values, breaks)


def check_superharmonic_logR(report: PolygonReport,
                             embedding: tuple[MetrizedGraph, GraphPL] | None = None) -> Verdict:
    """log R_S must have non-positive Laplacian at every interior point."""
    g, f = embedding if embedding is not None else embed_report(report)
    for i, e in enumerate(g.edges):
        if i >= len(f.edge_breaks):
            raise ValueError("incomplete embedding: an edge carries no PL data")
    kind = classify(g, f)
    if kind in ("harmonic", "superharmonic"):
        return Verdict(PASS, f"{kind} on the probed subgraph")
    bad = tuple((loc, m) for loc, m in laplacian(g, f).masses
                if m > 0 and not (isinstance(loc, str) and loc in g.boundary))
    return Verdict(FAIL, "positive Laplacian mass at an interior point", bad)


def borddisque_check(dm: DiffModule, N: int = 64, reverse: bool = False) -> Verdict:
    """Centre-to-boundary polygon on a disc: first slope 0, every slope <= 0.

    ``reverse=True`` reads the segment boundary-to-centre; it exists to prove
    the check can fail.
    """
    if not dm.domain.is_disc:
        raise ValueError("disc required")
    f = normalize(emb_radius_pl(dm, N), Triangulation())
    if reverse:
        f = f.reflect()
    sl = f.slopes()
    if sl[0] != 0:
        return Verdict(FAIL, "first slope from the centre is not 0", (sl[0],))
    pos = [(i, a) for i, a in enumerate(sl) if a > 0]
    if pos:
        return Verdict(FAIL, "positive slope on the centre-to-boundary segment", pos[0])
    return Verdict(PASS, f"slopes {[format_rational(a) for a in sl]}")


def check_rho_map(rho: TropicalPL, tri: Triangulation) -> Verdict:
    bad = [(i, sl) for i, sl in enumerate(rho.slopes()) if sl not in (-1, 0, 1)]
    if bad:
        return Verdict(FAIL, "slope outside {-1, 0, 1}", bad[0])
    nonzero = [(m, rho(m)) for m in tri.marks if rho(m) != 0]
    if nonzero:
        return Verdict(FAIL, "rho_{S',S} is not 1 on S", nonzero[0])
    return Verdict(PASS, f"slopes {[format_rational(a) for a in rho.slopes()]}")


def rho_maps_check(domain: Domain, tri: Triangulation, finer: Triangulation,
                   rho: TropicalPL | None = None) -> Verdict:
    """``rho`` overrides the computed log rho_{S',S} (harness self-tests)."""
    if not finer.contains(tri):
        raise ValueError("S' must contain S")
    if rho is None:
        rho = log_rho_relative(domain, tri, finer)
    return check_rho_map(rho, tri)
