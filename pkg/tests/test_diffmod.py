from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicradius.diffmod import (
    DiffModule,
    Domain,
    Triangulation,
    emb_radius_pl,
    iterate,
    log_rho,
    log_rho_relative,
    normalize,
    radius_log_at,
    radius_terms,
    retriangulate,
)
from padicradius.laurent import LaurentPoly
from padicradius.padic import abs_log
from padicradius.tropical import TropicalPL

from conftest import PRIMES, grid, laurent

F = Fraction
t = LaurentPoly.monomial(1)
ONE, ZERO = LaurentPoly.constant(1), LaurentPoly()
ANN = Domain.annulus(-2, 0)


def rank1(g, p=2, domain=ANN):
    return DiffModule(p, ((g,),), domain)


def test_domain_validation():
    with pytest.raises(ValueError):
        Domain.annulus(0, 0)
    with pytest.raises(ValueError):
        Domain("sector", s0=1)
    assert Domain.annulus(-2, F(1, 2)).modulus_log == F(5, 2)


def test_disc_refuses_poles():
    with pytest.raises(ValueError, match="pole inside disc"):
        rank1(LaurentPoly.monomial(-1), domain=Domain.disc(0))


def test_matrix_must_be_square():
    with pytest.raises(ValueError):
        DiffModule(2, ((ONE, ZERO),), ANN)


def test_triangulation_marks_must_be_interior():
    with pytest.raises(ValueError):
        Triangulation((F(0),)).validate(ANN)
    with pytest.raises(ValueError):
        Triangulation((F(1),)).validate(Domain.disc(0))


def test_iterate_examples():
    assert all(G == ((ZERO,),) for G in iterate(rank1(ZERO), 5))
    assert all(G == ((ONE,),) for G in iterate(rank1(ONE), 5))
    Gs = iterate(rank1(LaurentPoly.monomial(-1)), 6)
    assert Gs[0] == ((LaurentPoly.monomial(-1),),)
    assert all(G == ((ZERO,),) for G in Gs[1:])


def test_iterate_needs_positive_order():
    with pytest.raises(ValueError):
        iterate(rank1(ONE), 0)


def test_trivial_connection_on_disc_is_the_cap():
    est = emb_radius_pl(rank1(ZERO, domain=Domain.disc(0)), 10)
    assert est.on_skeleton == TropicalPL.constant(0, float("-inf"), 0)


def test_exponential_on_annulus():
    est = emb_radius_pl(rank1(ONE), 64)
    assert est.on_skeleton.breaks == (F(-63, 64),)
    assert est.on_skeleton.pieces == ((1, 0), (0, F(-63, 64)))
    # piece 0 is the cap, piece 1 the n = 64 term
    assert est.provenance == ((0,), (64,))


def test_slope_two_instance():
    est = emb_radius_pl(rank1(LaurentPoly.monomial(-2), 3, Domain.annulus(-2, F(-1, 4))), 81)
    assert est.on_skeleton.pieces == ((2, F(-40, 81)),)


def test_radius_log_at_trivial_connection_is_the_cap():
    dm = rank1(ZERO)
    assert radius_log_at(dm, 0, -1, 5) == (-1, -1)
    assert radius_log_at(dm, 1, -1, 5) == (0, 0)


def test_off_skeleton_cap_is_branch_disc_radius():
    # the largest disc around a point of the branch at c = 1 inside the
    # annulus has radius |c| = 1, so a constant G keeps its skeleton value
    assert radius_log_at(rank1(ONE), 1, -1, 64, 1) == (F(-63, 64), F(-63, 64))
    assert radius_log_at(rank1(LaurentPoly.monomial(-1)), 1, -2, 8, 8) == (0, 0)


def test_radius_log_at_errors():
    with pytest.raises(ValueError, match="out of domain"):
        radius_log_at(rank1(ONE), F(1, 8), -4, 8)
    with pytest.raises(ValueError, match="out of domain"):
        radius_log_at(rank1(ONE), 0, 1, 8)
    with pytest.raises(ValueError, match="pole inside disc"):
        radius_log_at(rank1(LaurentPoly.monomial(-1)), 2, 0, 8)


def test_radius_log_at_centre_matches_polygon():
    dm = rank1(LaurentPoly.monomial(-2), 3, Domain.annulus(-2, F(-1, 4)))
    est = emb_radius_pl(dm, 20)
    for s in grid(F(-2), F(-1, 4), 7):
        assert radius_log_at(dm, 0, s, 20) == (est.on_skeleton(s),) * 2


def test_normalize_examples():
    est = emb_radius_pl(rank1(ONE), 64)
    f = normalize(est, Triangulation())
    assert f.breaks == (F(-63, 64),)
    assert f.slopes() == [0, -1]
    assert f(0) == F(-63, 64)
    cap_only = emb_radius_pl(rank1(ZERO), 3)
    assert normalize(cap_only, Triangulation((F(-1),))) == TropicalPL.constant(0, -2, 0)


def test_retriangulate_examples():
    f = TropicalPL.identity(-2, 0).pointwise_min(TropicalPL.constant(-1, -2, 0))
    zero = TropicalPL.constant(0, -2, 0)
    assert retriangulate(f, zero) == f
    assert retriangulate(zero, TropicalPL.affine(1, -1, -2, 0)) == zero
    g = retriangulate(f, TropicalPL.identity(-2, 0))
    assert g.breaks == (-1,) and g(-2) == 0 and g(0) == -1


def test_log_rho_on_disc_and_annulus():
    assert log_rho(ANN, Triangulation((F(-1),))) == TropicalPL.identity(-2, 0)
    disc = Domain.disc(0)
    assert log_rho(disc, Triangulation()) == TropicalPL.constant(0, float("-inf"), 0)
    r = log_rho_relative(disc, Triangulation(), Triangulation((F(-1),)))
    # log rho_{S'} = max(s, -1) against log rho_S = 0
    assert r.slopes() == [0, 1]
    assert r(0) == 0 and r(-1) == -1


def test_refinement_must_contain_base():
    with pytest.raises(ValueError, match="S' must contain S"):
        log_rho_relative(ANN, Triangulation((F(-1),)), Triangulation((F(-1, 2),)))


@st.composite
def modules(draw, max_rank=2):
    m = draw(st.integers(1, max_rank))
    G = tuple(tuple(draw(laurent(-2, 2, 2)) for _ in range(m)) for _ in range(m))
    return DiffModule(draw(PRIMES), G, Domain.annulus(-3, 1))


@given(modules(), st.integers(1, 6), st.integers(0, 6))
def test_estimate_is_monotone_in_order(dm, N, extra):
    Gs = iterate(dm, N + extra)
    a = emb_radius_pl(dm, N, Gs[:N]).on_skeleton
    b = emb_radius_pl(dm, N + extra, Gs).on_skeleton
    assert b.pointwise_min(a) == b


@given(modules(), st.integers(1, 8))
def test_estimate_never_exceeds_cap(dm, N):
    est = emb_radius_pl(dm, N).on_skeleton
    assert est.pointwise_min(dm.domain.cap()) == est


@given(modules(), st.integers(1, 8))
def test_provenance_names_the_realising_terms(dm, N):
    est = emb_radius_pl(dm, N)
    terms = radius_terms(dm, N)
    assert len(est.provenance) == len(est.on_skeleton.pieces)
    for (a, b, piece), prov in zip(est.on_skeleton.cells(), est.provenance):
        assert prov and all(terms[n].piece_at((a + b) / 2) == piece for n in prov)


@given(laurent(-2, 2, 3), st.integers(1, 7))
def test_rank_one_matches_scalar_recursion(g, N):
    gn, want = g, [g]
    for _ in range(N - 1):
        gn = gn.derive() + gn * g
        want.append(gn)
    assert [G[0][0] for G in iterate(rank1(g), N)] == want


@given(st.lists(st.sampled_from([F(-3, 2), F(-1), F(-1, 2), F(-1, 3)]), max_size=3), PRIMES)
def test_trivial_connection_gives_unit_radius(marks, p):
    for domain in (ANN, Domain.disc(0)):
        est = emb_radius_pl(rank1(ZERO, p, domain), 4)
        lo, hi = domain.skeleton
        assert normalize(est, Triangulation(tuple(marks))) == TropicalPL.constant(0, lo, hi)


@pytest.mark.parametrize("c", [1, 3, 5])
def test_radius_stabilises_down_a_rational_branch(c):
    dm = rank1(ONE)
    vals = [radius_log_at(dm, c, s, 32, 4) for s in (F(-1), F(-3, 2), F(-2), F(-3))]
    assert len(set(vals)) == 1


@pytest.mark.parametrize("c", [3, 6, F(3, 2)])
def test_branch_values_approach_the_skeleton(c):
    dm = rank1(LaurentPoly.monomial(-2), 3, Domain.annulus(-2, F(-1, 4)))
    N = 27
    Gs = iterate(dm, N)
    branch = abs_log(c, 3)
    skel = emb_radius_pl(dm, N, Gs).on_skeleton(branch)
    for depth in (F(1, 2), F(1, 4)):
        lo, hi = radius_log_at(dm, c, branch - depth, N, 8, Gs)
        assert lo <= skel <= hi
