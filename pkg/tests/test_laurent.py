from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from padicradius.laurent import (
    LaurentPoly,
    format_laurent,
    gauss_norm_log,
    gauss_norm_pl,
    parse_laurent,
    recenter_norm_log,
)
from padicradius.padic import NEG_INF, abs_log, valp
from padicradius.tropical import TropicalPL

from conftest import PRIMES, grid, laurent, rationals

t = LaurentPoly.monomial(1)
F = Fraction


@pytest.mark.parametrize("f, want", [
    (t * t, 2 * t),
    (LaurentPoly.constant(7), LaurentPoly()),
    (LaurentPoly.monomial(-1), LaurentPoly.monomial(-2, -1)),
])
def test_derive_examples(f, want):
    assert f.derive() == want


@pytest.mark.parametrize("f, s, p, want", [
    (1 + 3 * t, 0, 3, 0),
    (LaurentPoly.monomial(-2), -1, 5, 2),
    (2 + t, F(-1, 2), 2, F(-1, 2)),
])
def test_gauss_norm_examples(f, s, p, want):
    assert gauss_norm_log(f, s, p) == want


def test_gauss_norm_of_zero_is_minus_infinity():
    assert gauss_norm_log(LaurentPoly(), 3, 2) == NEG_INF


def test_gauss_norm_pl_two_pieces():
    f = gauss_norm_pl(1 + 3 * t, 3)
    assert f.breaks == (1,)
    assert f.pieces == ((0, 0), (1, -1))


def test_gauss_norm_pl_monomial_and_constant():
    assert gauss_norm_pl(LaurentPoly.monomial(5), 2).pieces == ((5, 0),)
    assert gauss_norm_pl(LaurentPoly.constant(F(8, 3)), 2) == TropicalPL.constant(-3)


def test_gauss_norm_pl_of_zero_is_an_error():
    with pytest.raises(ValueError, match="norm of zero"):
        gauss_norm_pl(LaurentPoly(), 2)


@pytest.mark.parametrize("f, c, s, p, J, want", [
    (t, 1, -1, 2, 8, 0),
    (t - 1, 1, -1, 2, 8, -1),
    (LaurentPoly.monomial(-1), 1, -2, 3, 8, 0),
])
def test_recenter_examples(f, c, s, p, J, want):
    assert recenter_norm_log(f, c, s, p, J) == (want, want)


def test_recenter_refuses_pole_inside_disc():
    with pytest.raises(ValueError, match="pole inside disc"):
        recenter_norm_log(LaurentPoly.monomial(-1), 2, 0, 2, 4)


def test_recenter_on_skeleton_point_is_exact():
    # eta_{4,|4|} is eta_{0,|4|} for p = 2
    f = LaurentPoly.monomial(-3, 5) + t
    assert recenter_norm_log(f, 4, -2, 2, 1) == (gauss_norm_log(f, -2, 2),) * 2


def test_parse_examples():
    assert parse_laurent("1 + 1/2*t^-2") == 1 + LaurentPoly.monomial(-2, F(1, 2))
    assert parse_laurent(" - 3*t + t^2 ") == -3 * t + t * t
    assert parse_laurent("0") == LaurentPoly()


@pytest.mark.parametrize("text, col", [("1 + ", 2), ("2t", 0), ("1/0*t", 0), ("t^", 1), ("", 0)])
def test_parse_errors_carry_column(text, col):
    with pytest.raises(ValueError) as err:
        parse_laurent(text)
    assert err.value.args[1] == col


def test_parse_rejects_floats():
    with pytest.raises(ValueError):
        parse_laurent("0.5*t")


@given(laurent())
def test_text_round_trip(f):
    assert parse_laurent(format_laurent(f)) == f


@given(laurent(), laurent(), laurent())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == LaurentPoly()


@given(laurent(), laurent())
def test_leibniz(f, g):
    assert (f * g).derive() == f.derive() * g + f * g.derive()


@given(laurent(nonzero=True), laurent(nonzero=True), rationals(), PRIMES)
def test_gauss_norm_is_multiplicative(f, g, s, p):
    assert gauss_norm_log(f * g, s, p) == gauss_norm_log(f, s, p) + gauss_norm_log(g, s, p)


@given(laurent(nonzero=True), laurent(nonzero=True), rationals(), PRIMES)
def test_gauss_norm_is_ultrametric(f, g, s, p):
    a, b = gauss_norm_log(f, s, p), gauss_norm_log(g, s, p)
    total = gauss_norm_log(f + g, s, p)
    assert total <= max(a, b)
    if a != b:
        assert total == max(a, b)


@given(laurent(nonzero=True), PRIMES)
def test_gauss_norm_pl_is_convex_and_agrees_pointwise(f, p):
    pl = gauss_norm_pl(f, p, -5, 5)
    assert pl.is_convex()
    assert set(pl.slopes()) <= set(f.degrees())
    for s in grid(F(-5), F(5), 21):
        assert pl(s) == gauss_norm_log(f, s, p)


def _shift_norm(f: LaurentPoly, c, s, p):
    """Oracle for polynomials: expand f(c + u) by repeated multiplication."""
    u_plus_c = LaurentPoly.monomial(1) + c
    g = sum((a * u_plus_c ** k for k, a in f.terms), LaurentPoly())
    return gauss_norm_log(g, s, p)


@given(laurent(min_deg=0, max_deg=5, nonzero=True), rationals(nonzero=True), rationals(), PRIMES)
def test_recenter_is_exact_for_polynomials(f, c, s, p):
    lo, hi = recenter_norm_log(f, c, s, p, 3)
    assert lo == hi == _shift_norm(f, c, s, p)


@given(laurent(min_deg=-3, max_deg=3, nonzero=True), rationals(nonzero=True),
       st.integers(1, 4), PRIMES, st.integers(1, 6), st.integers(1, 6))
def test_recenter_bounds_tighten_with_J(f, c, depth, p, J, extra):
    s = abs_log(c, p) - depth
    lo1, hi1 = recenter_norm_log(f, c, s, p, J)
    lo2, hi2 = recenter_norm_log(f, c, s, p, J + extra)
    assert lo1 <= hi1 and lo2 <= hi2
    assert lo2 >= lo1 and hi2 <= hi1


@given(st.integers(1, 4), rationals(nonzero=True), st.integers(1, 3), PRIMES)
def test_recenter_of_pure_pole_is_its_centre_value(k, c, depth, p):
    # |t^-k| is constant on any disc around c avoiding 0
    f = LaurentPoly.monomial(-k)
    s = abs_log(c, p) - depth
    lo, hi = recenter_norm_log(f, c, s, p, 6)
    assert lo == hi == -valp(c ** -k, p)


@given(laurent(nonzero=True), rationals(nonzero=True), PRIMES)
def test_recenter_contains_value_at_centre(f, c, p):
    # the j = 0 coefficient is f(c), so |f(c)| <= |f(eta_{c,r})|
    assume(f(c) != 0)
    s = abs_log(c, p) - 1
    lo, hi = recenter_norm_log(f, c, s, p, 4)
    assert -valp(f(c), p) <= hi
