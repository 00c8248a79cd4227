"""``padicradius`` command line.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
usage, parse or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .diffmod import emb_radius_pl, iterate, normalize
from .graph import GraphPL, classify, dirichlet_solve, laplacian, format_location
from .manifest import Manifest, ManifestError, load_manifest
from .padic import INF, NEG_INF, format_rational
from .polygon import FAIL, ORIENTATION, PASS, assemble, borddisque_check
from .tropical import TropicalPL
from .verify import CRITERIA, instance_row, instance_table, run_all

HEADER = f"padicradius {__version__}"
DEFAULT_ORDER = 64
DEFAULT_TAIL = 8
DEFAULT_SAMPLES = 33


class UsageError(Exception):
    pass


# -- output helpers ---------------------------------------------------------

def _dump(payload: dict) -> str:
    return json.dumps({"generator": HEADER, **payload}, indent=2) + "\n"


def _tsv(body: str) -> str:
    return f"# {HEADER}\n{body}"


def _emit(args, outputs: dict[str, str]):
    """Write ``{filename: text}`` under ``--out``, or the JSON parts to stdout."""
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in outputs.items():
            (out / name).write_text(text, encoding="utf-8")
        for name in outputs:
            print(out / name)
    else:
        for name, text in outputs.items():
            if name.endswith(".json"):
                sys.stdout.write(text)


def _window(f: TropicalPL) -> tuple[Fraction, Fraction]:
    """Finite sampling window; an infinite end is cut one unit past the last feature."""
    lo, hi = f.lo, f.hi
    if lo == NEG_INF:
        lo = min([*f.breaks, hi if hi != INF else Fraction(0)]) - 1
    if hi == INF:
        hi = max([*f.breaks, lo]) + 1
    return lo, hi


def _pl_tsv(f: TropicalPL, count: int) -> str:
    lo, hi = _window(f)
    return _tsv(f.to_tsv(count, lo, hi))


# -- manifest access --------------------------------------------------------

def _manifest(args) -> Manifest:
    if not args.manifest:
        raise UsageError(f"'{args.command}' needs --manifest")
    return load_manifest(args.manifest)


def _require(m: Manifest, *blocks: str):
    checks = {
        "prime": m.prime is not None,
        "domain": m.domain is not None,
        "matrix": m.matrix is not None,
        "graph": m.graph is not None,
        "values": m.values is not None,
    }
    for b in blocks:
        if not checks[b]:
            raise UsageError(f"manifest lacks the required {'key' if b == 'prime' else 'block'} "
                             f"{b if b == 'prime' else f'[{b}]'}")


def _order(args, m: Manifest) -> int:
    n = args.order if args.order is not None else (m.order or DEFAULT_ORDER)
    if n < 1:
        raise UsageError("--order must be >= 1")
    return n


def _tail(args, m: Manifest) -> int:
    j = args.tail if args.tail is not None else (m.tail or DEFAULT_TAIL)
    if j < 1:
        raise UsageError("--tail must be >= 1")
    return j


def _samples(args, m: Manifest) -> int:
    k = args.samples if args.samples is not None else (m.samples or DEFAULT_SAMPLES)
    if k < 2:
        raise UsageError("--samples must be >= 2")
    return k


def graph_function(m: Manifest):
    """Vertex values from ``name = q``; edge breakpoints from ``e<i>@<pos> = q``."""
    g = m.metrized_graph()
    vertex_values, breaks = {}, {}
    for key, q in m.value_map().items():
        if key in g.vertices:
            vertex_values[key] = q
        elif key.startswith("e") and "@" in key:
            idx, _, pos = key[1:].partition("@")
            try:
                i, x = int(idx), Fraction(pos)
            except ValueError:
                raise UsageError(f"bad edge point {key!r}") from None
            if not 0 <= i < len(g.edges):
                raise UsageError(f"edge index out of range in {key!r}")
            breaks.setdefault(i, []).append((x, q))
        else:
            raise UsageError(f"value for unknown vertex {key!r}")
    return g, vertex_values, breaks


# -- commands ---------------------------------------------------------------

def cmd_radius(args) -> int:
    m = _manifest(args)
    _require(m, "prime", "domain", "matrix")
    dm, N = m.module(), _order(args, m)
    est = emb_radius_pl(dm, N, iterate(dm, N))
    normalized = normalize(est, m.triangulation())
    payload = {
        "command": "radius",
        "orientation": ORIENTATION,
        "prime": dm.p,
        "rank": dm.rank,
        "domain": dm.domain.kind,
        "triangulation": [format_rational(x) for x in m.triangulation().marks],
        "estimate": est.to_dict(),
        "breakpoints": [format_rational(b) for b in est.on_skeleton.breaks],
        "normalized": normalized.to_dict(),
        "note": f"estimate at order {N}",
    }
    count = _samples(args, m)
    _emit(args, {
        "radius.json": _dump(payload),
        "radius.tsv": _pl_tsv(est.on_skeleton, count),
        "radius_normalized.tsv": _pl_tsv(normalized, count),
    })
    return 0


def cmd_polygon(args) -> int:
    m = _manifest(args)
    _require(m, "prime", "domain", "matrix")
    dm = m.module()
    rep = assemble(dm, m.triangulation(), _order(args, m), m.probes, _tail(args, m))
    payload = {"command": "polygon", **rep.to_dict()}
    if dm.domain.is_disc:
        payload["disc_boundary"] = borddisque_check(dm, rep.estimate.N).to_dict()
    _emit(args, {
        "polygon.json": _dump(payload),
        "polygon.tsv": _pl_tsv(rep.normalized, _samples(args, m)),
    })
    failed = (rep.concavity.status == FAIL or not rep.slopes.passed
              or rep.superharmonic.status == FAIL
              or payload.get("disc_boundary", {}).get("status") == FAIL)
    return 1 if failed else 0


def cmd_laplacian(args) -> int:
    m = _manifest(args)
    _require(m, "graph", "values")
    g, vals, breaks = graph_function(m)
    missing = sorted(set(g.vertices) - set(vals))
    if missing:
        raise UsageError(f"[values] has no value for {missing}")
    f = GraphPL.make(g, vals, breaks)
    mu = laplacian(g, f)
    payload = {
        "command": "laplacian",
        "masses": [[format_location(loc), format_rational(q)] for loc, q in mu.masses],
        "total": format_rational(mu.total()),
        "classification": classify(g, f),
    }
    _emit(args, {"laplacian.json": _dump(payload), "laplacian.tsv": _tsv(mu.to_tsv())})
    return 0


def cmd_dirichlet(args) -> int:
    m = _manifest(args)
    _require(m, "graph", "values")
    g, vals, breaks = graph_function(m)
    if breaks:
        raise UsageError("dirichlet takes boundary vertex values only")
    extra = sorted(set(vals) - g.boundary)
    if extra:
        raise UsageError(f"values given for interior vertices {extra}")
    u = dirichlet_solve(g, vals)
    kind = classify(g, u)
    payload = {
        "command": "dirichlet",
        "values": [[v, format_rational(u.value(v))] for v in g.vertices],
        "classification": kind,
    }
    lines = ["vertex\tvalue\tvalue_decimal"]
    lines += [f"{v}\t{format_rational(u.value(v))}\t{float(u.value(v)):.12g}" for v in g.vertices]
    _emit(args, {"dirichlet.json": _dump(payload), "dirichlet.tsv": _tsv("\n".join(lines) + "\n")})
    return 0 if kind == "harmonic" else 1


def cmd_verify(args) -> int:
    if args.manifest:
        m = load_manifest(args.manifest)
        _require(m, "prime", "domain", "matrix")
        from .instances import Instance
        inst = Instance(Path(args.manifest).stem, m.module(), _order(args, m), m.probes,
                        m.triangulation().marks, tail=_tail(args, m))
        row = instance_row(inst)
        sys.stdout.write(instance_table([row]))
        return 0 if row.passed else 1
    results, rows = run_all(CRITERIA)
    for r in results:
        print(r.line)
    print()
    sys.stdout.write(instance_table(rows))
    ok = all(r.passed for r in results) and all(r.passed for r in rows)
    print()
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria, "
          f"{sum(r.passed for r in rows)}/{len(rows)} instances: {PASS if ok else FAIL}")
    return 0 if ok else 1


COMMANDS = {
    "radius": cmd_radius,
    "polygon": cmd_polygon,
    "laplacian": cmd_laplacian,
    "dirichlet": cmd_dirichlet,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padicradius",
                                 description="Exact radius-of-convergence polygons and graph potentials.")
    ap.add_argument("--version", action="version", version=HEADER)
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "radius": "embedded radius along the skeleton",
        "polygon": "full polygon report with certification",
        "laplacian": "Laplacian measure of a PL function on a graph",
        "dirichlet": "harmonic extension of boundary values",
        "verify": "run the acceptance suite, or check one manifest",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--manifest", metavar="PATH")
        sp.add_argument("--order", type=int, metavar="N")
        sp.add_argument("--tail", type=int, metavar="J")
        sp.add_argument("--out", metavar="DIR")
        sp.add_argument("--samples", type=int, metavar="COUNT")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ManifestError) as exc:
        print(f"padicradius: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"padicradius: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
