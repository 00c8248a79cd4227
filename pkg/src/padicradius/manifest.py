"""Line-based manifest format.

::

    # comments start with '#'
    prime = 2

    [domain]
    kind = annulus          # or: disc
    inner = -2              # annulus only
    outer = 0               # annulus only
    radius = 0              # disc only

    [matrix]
    rank = 2
    row = 0 ; 1             # entries separated by ';'
    row = t ; 0

    [triangulation]
    marks = -1, -1/2

    [graph]
    vertex = a boundary
    vertex = x
    edge = a x 1            # u v length [weight_u weight_v]

    [values]
    a = 0

    [run]
    order = 64
    tail = 8
    probe = 1 -1            # c s, repeatable
    samples = 33

Every number is an exact rational ``a`` or ``a/b``.  Unknown keys and
sections are errors, and errors carry 1-based line and column numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffmod import DiffModule, Domain, Triangulation
from .graph import Edge, MetrizedGraph
from .laurent import LaurentPoly, format_laurent, parse_laurent
from .padic import Prime, format_rational, parse_rational


class ManifestError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class GraphBlock:
    vertices: tuple[tuple[str, bool], ...]
    edges: tuple[tuple[str, str, Fraction, int, int], ...]

    def build(self) -> MetrizedGraph:
        return MetrizedGraph(
            tuple(v for v, _ in self.vertices),
            tuple(Edge(u, v, length, wu, wv) for u, v, length, wu, wv in self.edges),
            frozenset(v for v, b in self.vertices if b),
        )


@dataclass(frozen=True)
class Manifest:
    prime: int | None = None
    domain: Domain | None = None
    matrix: tuple[tuple[LaurentPoly, ...], ...] | None = None
    marks: tuple[Fraction, ...] | None = None
    graph: GraphBlock | None = None
    values: tuple[tuple[str, Fraction], ...] | None = None
    order: int | None = None
    tail: int | None = None
    probes: tuple[tuple[Fraction, Fraction], ...] = ()
    samples: int | None = None

    def module(self) -> DiffModule:
        if self.prime is None:
            raise ManifestError("missing key 'prime'")
        for block, value in (("domain", self.domain), ("matrix", self.matrix)):
            if value is None:
                raise ManifestError(f"missing block [{block}]")
        return DiffModule(Prime(self.prime), self.matrix, self.domain)

    def triangulation(self) -> Triangulation:
        return Triangulation(self.marks or ())

    def metrized_graph(self) -> MetrizedGraph:
        if self.graph is None:
            raise ManifestError("missing block [graph]")
        return self.graph.build()

    def value_map(self) -> dict[str, Fraction]:
        if self.values is None:
            raise ManifestError("missing block [values]")
        return dict(self.values)


_SECTIONS = ("domain", "matrix", "triangulation", "graph", "values", "run")
_KEYS = {
    None: {"prime"},
    "domain": {"kind", "inner", "outer", "radius"},
    "matrix": {"rank", "row"},
    "triangulation": {"marks"},
    "graph": {"vertex", "edge"},
    "run": {"order", "tail", "probe", "samples"},
}
_REPEATABLE = {"row", "vertex", "edge", "probe"}


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _rational(text: str, line: int, col: int) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise ManifestError(str(exc), line, col) from None


def _integer(text: str, line: int, col: int, least: int) -> int:
    try:
        n = int(text.strip())
    except ValueError:
        raise ManifestError(f"expected an integer, got {text.strip()!r}", line, col) from None
    if n < least:
        raise ManifestError(f"expected an integer >= {least}, got {n}", line, col)
    return n


def _fields(text: str, base_col: int) -> list[tuple[str, int]]:
    """Whitespace-separated fields with their 1-based columns."""
    out, i = [], 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        out.append((text[i:j], base_col + i))
        i = j
    return out


def parse_manifest(text: str) -> Manifest:
    section = None
    seen_sections: set[str] = set()
    scalars: dict[tuple, tuple[str, int, int]] = {}
    rows, vertices, edges, probes, values = [], [], [], [], []
    marks = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        body = line.strip()
        if not body:
            continue
        indent = len(line) - len(line.lstrip())
        if body.startswith("["):
            if not body.endswith("]"):
                raise ManifestError("unterminated section header", lineno, indent + 1)
            name = body[1:-1].strip()
            if name not in _SECTIONS:
                raise ManifestError(f"unknown section [{name}]", lineno, indent + 1)
            if name in seen_sections:
                raise ManifestError(f"duplicate section [{name}]", lineno, indent + 1)
            seen_sections.add(name)
            section = name
            continue
        if "=" not in body:
            raise ManifestError("expected 'key = value'", lineno, indent + 1)
        eq = line.index("=")
        key = line[:eq].strip()
        vcol = eq + 2 + (len(line[eq + 1:]) - len(line[eq + 1:].lstrip()))
        value = line[eq + 1:].strip()
        if section == "values":
            if not key or any(ch.isspace() for ch in key):
                raise ManifestError(f"bad vertex name {key!r}", lineno, indent + 1)
            values.append((key, _rational(value, lineno, vcol), lineno, indent + 1))
            continue
        if key not in _KEYS[section]:
            where = f"[{section}]" if section else "the top level"
            raise ManifestError(f"unknown key {key!r} in {where}", lineno, indent + 1)
        if not value:
            raise ManifestError(f"empty value for {key!r}", lineno, vcol)
        if key not in _REPEATABLE:
            if (section, key) in scalars:
                raise ManifestError(f"duplicate key {key!r}", lineno, indent + 1)
            if key == "marks":
                marks = []
                col = vcol
                for part in value.split(","):
                    if not part.strip():
                        raise ManifestError("empty mark", lineno, col)
                    pcol = col + len(part) - len(part.lstrip())
                    marks.append(_rational(part, lineno, pcol))
                    col += len(part) + 1
                scalars[(section, key)] = (value, lineno, vcol)
                continue
            scalars[(section, key)] = (value, lineno, vcol)
            continue
        if key == "row":
            entries, col = [], vcol
            for part in value.split(";"):
                try:
                    entries.append(parse_laurent(part))
                except ValueError as exc:
                    offset = exc.args[1] if len(exc.args) > 1 else 0
                    raise ManifestError(exc.args[0], lineno, col + offset) from None
                col += len(part) + 1
            rows.append((tuple(entries), lineno, vcol))
        elif key == "vertex":
            f = _fields(value, vcol)
            if len(f) not in (1, 2) or (len(f) == 2 and f[1][0] != "boundary"):
                raise ManifestError("expected 'vertex = NAME [boundary]'", lineno, vcol)
            vertices.append((f[0][0], len(f) == 2))
        elif key == "edge":
            f = _fields(value, vcol)
            if len(f) not in (3, 5):
                raise ManifestError("expected 'edge = U V LENGTH [WEIGHT_U WEIGHT_V]'", lineno, vcol)
            length = _rational(f[2][0], lineno, f[2][1])
            wu = _integer(f[3][0], lineno, f[3][1], 1) if len(f) == 5 else 1
            wv = _integer(f[4][0], lineno, f[4][1], 1) if len(f) == 5 else 1
            edges.append((f[0][0], f[1][0], length, wu, wv, lineno, vcol))
        elif key == "probe":
            f = _fields(value, vcol)
            if len(f) != 2:
                raise ManifestError("expected 'probe = C S'", lineno, vcol)
            probes.append((_rational(f[0][0], lineno, f[0][1]), _rational(f[1][0], lineno, f[1][1])))

    def scalar(sec, key):
        return scalars.get((sec, key))

    prime = None
    if (got := scalar(None, "prime")) is not None:
        text_, ln, col = got
        prime = _integer(text_, ln, col, 2)
        try:
            Prime(prime)
        except ValueError as exc:
            raise ManifestError(str(exc), ln, col) from None

    domain = None
    if "domain" in seen_sections:
        domain = _domain(scalar)

    matrix = None
    if "matrix" in seen_sections:
        got = scalar("matrix", "rank")
        if got is None:
            raise ManifestError("[matrix] needs 'rank'")
        rank = _integer(got[0], got[1], got[2], 1)
        if len(rows) != rank:
            raise ManifestError(f"rank {rank} but {len(rows)} rows", got[1], got[2])
        for entries, ln, col in rows:
            if len(entries) != rank:
                raise ManifestError(f"row has {len(entries)} entries, rank is {rank}", ln, col)
        matrix = tuple(entries for entries, _, _ in rows)

    graph = None
    if "graph" in seen_sections:
        names = [v for v, _ in vertices]
        if len(set(names)) != len(names):
            raise ManifestError("duplicate vertex names in [graph]")
        for u, v, length, wu, wv, ln, col in edges:
            for x in (u, v):
                if x not in names:
                    raise ManifestError(f"edge uses unknown vertex {x!r}", ln, col)
            if length <= 0:
                raise ManifestError("edge lengths must be positive", ln, col)
            if u == v:
                raise ManifestError("loops are not supported", ln, col)
        graph = GraphBlock(tuple(vertices), tuple(e[:5] for e in edges))

    vals = None
    if "values" in seen_sections:
        seen = set()
        for name, _, ln, col in values:
            if name in seen:
                raise ManifestError(f"duplicate value for {name!r}", ln, col)
            seen.add(name)
        vals = tuple((name, q) for name, q, _, _ in values)

    run = {}
    for key, least in (("order", 1), ("tail", 1), ("samples", 2)):
        if (got := scalar("run", key)) is not None:
            run[key] = _integer(got[0], got[1], got[2], least)

    return Manifest(
        prime=prime,
        domain=domain,
        matrix=matrix,
        marks=tuple(marks) if marks is not None else None,
        graph=graph,
        values=vals,
        probes=tuple(probes),
        **run,
    )


def _domain(scalar) -> Domain:
    got = scalar("domain", "kind")
    if got is None:
        raise ManifestError("[domain] needs 'kind'")
    kind, ln, col = got
    if kind == "disc":
        if scalar("domain", "inner") or scalar("domain", "outer"):
            raise ManifestError("a disc takes 'radius' only", ln, col)
        r = scalar("domain", "radius")
        if r is None:
            raise ManifestError("disc needs 'radius'", ln, col)
        return Domain.disc(_rational(*r))
    if kind == "annulus":
        if scalar("domain", "radius"):
            raise ManifestError("an annulus takes 'inner' and 'outer'", ln, col)
        inner, outer = scalar("domain", "inner"), scalar("domain", "outer")
        if inner is None or outer is None:
            raise ManifestError("annulus needs 'inner' and 'outer'", ln, col)
        s1, s2 = _rational(*inner), _rational(*outer)
        if not s1 < s2:
            raise ManifestError("annulus needs inner < outer", outer[1], outer[2])
        return Domain.annulus(s1, s2)
    raise ManifestError(f"unknown domain kind {kind!r}", ln, col)


def format_manifest(m: Manifest) -> str:
    out = []
    if m.prime is not None:
        out.append(f"prime = {m.prime}")
    if m.domain is not None:
        out += ["", "[domain]", f"kind = {m.domain.kind}"]
        if m.domain.is_disc:
            out.append(f"radius = {format_rational(m.domain.s0)}")
        else:
            out += [f"inner = {format_rational(m.domain.s1)}",
                    f"outer = {format_rational(m.domain.s2)}"]
    if m.matrix is not None:
        out += ["", "[matrix]", f"rank = {len(m.matrix)}"]
        out += ["row = " + " ; ".join(format_laurent(e) for e in row) for row in m.matrix]
    if m.marks is not None:
        out += ["", "[triangulation]", "marks = " + ", ".join(format_rational(x) for x in m.marks)]
    if m.graph is not None:
        out += ["", "[graph]"]
        out += [f"vertex = {v}" + (" boundary" if b else "") for v, b in m.graph.vertices]
        for u, v, length, wu, wv in m.graph.edges:
            w = f" {wu} {wv}" if (wu, wv) != (1, 1) else ""
            out.append(f"edge = {u} {v} {format_rational(length)}{w}")
    if m.values is not None:
        out += ["", "[values]"]
        out += [f"{name} = {format_rational(q)}" for name, q in m.values]
    run = [f"{k} = {getattr(m, k)}" for k in ("order", "tail") if getattr(m, k) is not None]
    run += [f"probe = {format_rational(c)} {format_rational(s)}" for c, s in m.probes]
    if m.samples is not None:
        run.append(f"samples = {m.samples}")
    if run:
        out += ["", "[run]", *run]
    return "\n".join(out).lstrip("\n") + "\n"


def load_manifest(path) -> Manifest:
    with open(path, encoding="utf-8") as fh:
        return parse_manifest(fh.read())
