from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicradius.diffmod import DiffModule, Domain, Triangulation, emb_radius_pl, normalize
from padicradius.graph import MetrizedGraph
from padicradius.instances import AIRY_DISC, BUNDLED, EXP_ANNULUS, GAUSS_DISC, SLOPE2_ANNULUS
from padicradius.laurent import LaurentPoly
from padicradius.polygon import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    assemble,
    borddisque_check,
    check_rho_map,
    check_superharmonic_logR,
    concavity_verdict,
    embed_report,
    rho_maps_check,
)
from padicradius.tropical import TropicalPL, certify_slopes

F = Fraction
ONE, ZERO = LaurentPoly.constant(1), LaurentPoly()
ANN = Domain.annulus(-2, 0)


def rank1(g, p=2, domain=ANN):
    return DiffModule(p, ((g,),), domain)


@pytest.fixture(scope="module")
def exp_report():
    return assemble(EXP_ANNULUS.module, N=64, probes=EXP_ANNULUS.probes)


def test_trivial_connection_report():
    for domain in (ANN, Domain.disc(0)):
        rep = assemble(rank1(ZERO, domain=domain), N=8, probes=[(1, -1)])
        assert rep.concavity.status == PASS
        assert rep.normalized.slopes() == [0] and rep.breakpoints == []
        assert rep.constancy.status == PASS
        assert rep.superharmonic.status == PASS


def test_exponential_report(exp_report):
    rep = exp_report
    assert rep.normalized.slopes() == [0, -1]
    assert rep.breakpoints == [F(-63, 64)]
    assert rep.concavity.status == PASS and rep.slopes.passed
    assert rep.constancy.detail == "no non-constancy detected on probed branches at order 64"
    assert rep.superharmonic.status == PASS


def test_slope_two_report_is_certified():
    rep = assemble(SLOPE2_ANNULUS.module, N=81)
    assert rep.estimate.on_skeleton.slopes() == [2]
    assert rep.slopes.passed and rep.slopes.rank == 1
    assert rep.concavity.status == PASS


def test_rank_two_half_slope_needs_rank_two():
    rep = assemble(AIRY_DISC.module, AIRY_DISC.triangulation, 64)
    assert F(-3, 2) in rep.normalized.slopes()
    assert rep.slopes.passed and rep.slopes.rank == 2
    assert not certify_slopes(rep.normalized, 1).passed


def test_probe_errors_propagate():
    with pytest.raises(ValueError, match="out of domain"):
        assemble(rank1(ONE), N=4, probes=[(F(1, 8), -4)])
    with pytest.raises(ValueError, match="pole inside disc"):
        assemble(rank1(LaurentPoly.monomial(-1)), N=4, probes=[(2, 0)])


def test_detected_stub_carries_its_witness():
    rep = assemble(GAUSS_DISC.module, N=32, probes=GAUSS_DISC.probes)
    stub, plain = rep.probes
    assert stub.verdict == FAIL and plain.verdict == PASS
    # radius near t = 1 is 2^(-3/4) in the limit, against 2^(-1) on the skeleton
    assert stub.lower == stub.upper == F(-23, 32)
    assert stub.predicted == F(-31, 32)
    assert rep.stubs == (stub,)
    assert rep.constancy.status == FAIL
    assert rep.constancy.witness == ((1, -1),)
    assert rep.superharmonic.status == PASS


def test_stub_gap_does_not_close_with_order():
    gaps = []
    for N in (16, 32):
        pr = assemble(GAUSS_DISC.module, N=N, probes=[(1, -1)], recheck=False).probes[0]
        gaps.append(pr.lower - pr.predicted)
    assert gaps == [F(1, 4), F(1, 4)]


def test_embedding_shape(exp_report):
    g, f = embed_report(exp_report)
    assert isinstance(g, MetrizedGraph)
    assert len(g.edges) == 1 + len(exp_report.probes)
    assert {v for v in g.vertices if v.startswith("probe")} <= g.boundary


def test_superharmonic_check_rejects_negated_polygon(exp_report):
    flipped = replace(exp_report, normalized=-exp_report.normalized, probes=())
    v = check_superharmonic_logR(flipped)
    assert v.status == FAIL and v.witness


def test_superharmonic_check_needs_complete_embedding(exp_report):
    g, f = embed_report(exp_report)
    short = replace(f, edge_breaks=f.edge_breaks[:-1])
    with pytest.raises(ValueError, match="incomplete embedding"):
        check_superharmonic_logR(exp_report, (g, short))


def test_borddisque_examples():
    assert borddisque_check(rank1(ZERO, domain=Domain.disc(0)), 8).status == PASS
    v = borddisque_check(rank1(ONE, domain=Domain.disc(0)), 64)
    assert v.status == PASS
    gauss = GAUSS_DISC.module
    assert borddisque_check(gauss, 32).status == PASS
    rev = borddisque_check(gauss, 32, reverse=True)
    assert rev.status == FAIL and rev.witness


def test_borddisque_needs_a_disc():
    with pytest.raises(ValueError, match="disc required"):
        borddisque_check(rank1(ONE), 8)


def test_rho_map_examples():
    disc = Domain.disc(0)
    tri = Triangulation((F(-1),))
    assert rho_maps_check(disc, tri, tri).status == PASS
    assert rho_maps_check(disc, Triangulation(), Triangulation((F(-1, 2),))).status == PASS
    bad = TropicalPL.affine(2, 0, -2, 0)
    assert rho_maps_check(ANN, Triangulation(), Triangulation(), rho=bad).status == FAIL
    assert check_rho_map(TropicalPL.constant(-1, -2, 0), Triangulation((F(-1),))).status == FAIL


def test_rho_map_needs_refinement():
    with pytest.raises(ValueError, match="S' must contain S"):
        rho_maps_check(ANN, Triangulation((F(-1),)), Triangulation())


def _kinked(est):
    lo, hi = est.domain.skeleton
    bad = TropicalPL.from_points([(lo, 0), (-1, -1), (hi, 0)])
    return replace(est, on_skeleton=bad)


def test_concavity_kink_removed_at_double_order_is_inconclusive():
    dm = EXP_ANNULUS.module
    v = concavity_verdict(dm, _kinked(emb_radius_pl(dm, 8)), Triangulation())
    assert v.status == INCONCLUSIVE
    assert v.witness == (-1, -1, 1)


def test_concavity_kink_persisting_at_double_order_fails(monkeypatch):
    import padicradius.polygon as poly
    dm = EXP_ANNULUS.module
    real = poly.emb_radius_pl
    monkeypatch.setattr(poly, "emb_radius_pl", lambda dm, N, Gs=None: _kinked(real(dm, N, Gs)))
    v = concavity_verdict(dm, _kinked(real(dm, 8)), Triangulation())
    assert v.status == FAIL and v.witness


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 12))
def test_estimator_output_is_always_concave(a, b, N):
    # every term is minus a max of affine functions
    g = LaurentPoly(((-a, 1), (b, F(1, 2))))
    dm = DiffModule(3, ((g,),), Domain.annulus(-3, 3))
    est = emb_radius_pl(dm, N)
    assert est.on_skeleton.is_concave()
    assert normalize(est, Triangulation((F(-1),))).is_concave()


@pytest.mark.parametrize("inst", BUNDLED, ids=lambda i: i.name)
def test_refinement_in_order_never_raises_the_polygon(inst):
    lo = assemble(inst.module, inst.triangulation, max(2, inst.order // 4))
    hi = assemble(inst.module, inst.triangulation, max(2, inst.order // 2))
    assert hi.normalized.pointwise_min(lo.normalized) == hi.normalized
    assert not (lo.concavity.status == PASS and hi.concavity.status == FAIL)


def test_report_serialises_exact_rationals(exp_report):
    d = exp_report.to_dict()
    assert d["breakpoints"] == ["-63/64"]
    assert d["controlling_graph"]["note"].startswith("lower approximation")
    assert all(p["verdict"] == PASS for p in d["probes"])
