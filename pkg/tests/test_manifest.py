from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicradius.diffmod import Domain
from padicradius.laurent import LaurentPoly
from padicradius.manifest import GraphBlock, Manifest, ManifestError, format_manifest, load_manifest, parse_manifest

from conftest import PRIMES, laurent, rationals

F = Fraction
MANIFESTS = Path(__file__).resolve().parent.parent / "manifests"


def test_exp_annulus_manifest():
    m = load_manifest(MANIFESTS / "exp_annulus.manifest")
    dm = m.module()
    assert dm.p == 2 and dm.domain == Domain.annulus(-2, 0)
    assert dm.G == ((LaurentPoly.constant(1),),)
    assert m.order == 64 and m.samples == 17
    assert m.probes == ((1, -1), (3, -1), (5, -1))
    assert m.triangulation().marks == ()


def test_airy_manifest_has_marks_and_rank_two():
    m = load_manifest(MANIFESTS / "airy_disc.manifest")
    assert m.module().rank == 2
    assert m.triangulation().marks == (F(-1),)


def test_graph_manifest():
    m = load_manifest(MANIFESTS / "star_dirichlet.manifest")
    g = m.metrized_graph()
    assert g.boundary == frozenset("abc")
    assert m.value_map() == {"a": 0, "b": 0, "c": 3}


@pytest.mark.parametrize("text, line, col", [
    ("prime = 2\n[domain]\nkind = disc\nradius = 1/0\n", 4, 10),
    ("prime = 2\nfoo = 1\n", 2, 1),
    ("[nowhere]\n", 1, 1),
    ("[run]\n  order = x\n", 2, 11),
    ("[matrix]\nrank = 1\nrow = 2t\n", 3, 7),
    ("[triangulation]\nmarks = -1, , -2\n", 2, 12),
    ("[run]\nprobe = 1\n", 2, 9),
    ("prime = 4\n", 1, 9),
    ("[domain]\nkind = annulus\ninner = 0\nouter = -1\n", 4, 9),
    ("[graph]\nvertex = a\nedge = a b 1\n", 3, 8),
    ("prime = 2\nprime = 3\n", 2, 1),
    ("[run]\n[run]\n", 2, 1),
    ("just words\n", 1, 1),
])
def test_errors_carry_line_and_column(text, line, col):
    with pytest.raises(ManifestError) as err:
        parse_manifest(text)
    assert (err.value.line, err.value.column) == (line, col)
    assert str(err.value).startswith(f"line {line}, column {col}: ")


@pytest.mark.parametrize("value", ["0.5", "1e3", "1/0", "one"])
def test_non_rational_numbers_are_rejected(value):
    with pytest.raises(ManifestError):
        parse_manifest(f"[domain]\nkind = disc\nradius = {value}\n")


def test_bad_rational_file():
    with pytest.raises(ManifestError, match="line 5"):
        load_manifest(MANIFESTS / "bad_rational.manifest")


def test_rank_and_row_count_must_agree():
    with pytest.raises(ManifestError, match="rank 2 but 1 rows"):
        parse_manifest("[matrix]\nrank = 2\nrow = 1 ; 0\n")
    with pytest.raises(ManifestError, match="row has 1 entries"):
        parse_manifest("[matrix]\nrank = 2\nrow = 1\nrow = 0 ; 1\n")


def test_missing_blocks_are_reported_on_use():
    m = parse_manifest("prime = 2\n")
    with pytest.raises(ManifestError, match=r"missing block \[domain\]"):
        m.module()
    with pytest.raises(ManifestError, match=r"missing block \[graph\]"):
        m.metrized_graph()


def test_comments_and_blank_lines_are_ignored():
    m = parse_manifest("# header\n\nprime = 3   # trailing\n")
    assert m.prime == 3


@st.composite
def manifests(draw):
    disc = draw(st.booleans())
    if disc:
        domain = Domain.disc(draw(rationals()))
        entry = laurent(min_deg=0)
    else:
        a, b = sorted(draw(st.lists(rationals(), min_size=2, max_size=2, unique=True)))
        domain = Domain.annulus(a, b)
        entry = laurent()
    rank = draw(st.integers(1, 3))
    matrix = tuple(tuple(draw(entry) for _ in range(rank)) for _ in range(rank))
    lo, hi = domain.skeleton
    inside = rationals().filter(lambda x: (lo is None or x > lo) and x < hi) if not disc \
        else rationals().filter(lambda x: x < domain.s0)
    names = draw(st.lists(st.from_regex(r"[a-z][a-z0-9_]{0,4}", fullmatch=True),
                          min_size=2, max_size=5, unique=True))
    edges = tuple((names[i], names[i + 1], draw(rationals(nonzero=True).map(abs)), w, w)
                  for i, w in ((i, draw(st.integers(1, 3))) for i in range(len(names) - 1)))
    graph = GraphBlock(tuple((n, draw(st.booleans())) for n in names), edges)
    return Manifest(
        prime=draw(PRIMES),
        domain=domain,
        matrix=matrix,
        marks=tuple(sorted(set(draw(st.lists(inside, max_size=3))))) or None,
        graph=graph,
        values=tuple((n, draw(rationals())) for n in names),
        order=draw(st.none() | st.integers(1, 200)),
        tail=draw(st.none() | st.integers(1, 20)),
        probes=tuple(draw(st.lists(st.tuples(rationals(nonzero=True), rationals()), max_size=3))),
        samples=draw(st.none() | st.integers(2, 99)),
    )


@given(manifests())
def test_round_trip(m):
    text = format_manifest(m)
    assert parse_manifest(text) == m
    assert format_manifest(parse_manifest(text)) == text
