from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from padicradius.laurent import LaurentPoly
from padicradius.tropical import TropicalPL

settings.register_profile("default", deadline=None, max_examples=80,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PRIMES = st.sampled_from([2, 3, 5, 7])


def rationals(max_num=60, max_den=12, nonzero=False):
    num = st.integers(-max_num, max_num)
    if nonzero:
        num = num.filter(bool)
    return st.builds(Fraction, num, st.integers(1, max_den))


def laurent(min_deg=-3, max_deg=4, max_terms=4, nonzero=False):
    term = st.tuples(st.integers(min_deg, max_deg), rationals(nonzero=True))
    polys = st.lists(term, max_size=max_terms).map(lambda ts: LaurentPoly(tuple(ts)))
    return polys.filter(lambda f: not f.is_zero()) if nonzero else polys


@st.composite
def pl_functions(draw, lo=Fraction(-4), hi=Fraction(4)):
    """Random continuous PL function on [lo, hi] from values at random abscissae."""
    xs = draw(st.lists(st.integers(1, 15), unique=True, max_size=5))
    pts = [(lo, draw(rationals()))]
    pts += [(lo + (hi - lo) * Fraction(x, 16), draw(rationals())) for x in sorted(xs)]
    pts.append((hi, draw(rationals())))
    return TropicalPL.from_points(pts)


@st.composite
def affine_families(draw, lo=Fraction(-4), hi=Fraction(4)):
    n = draw(st.integers(1, 5))
    return [TropicalPL.affine(draw(rationals(8, 3)), draw(rationals()), lo, hi) for _ in range(n)]


def grid(lo, hi, count=33):
    return [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]
