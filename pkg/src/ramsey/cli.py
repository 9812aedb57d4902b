"""Command-line entry point: ``ramsey <subcommand> ...``.

Tabular output is CSV on stdout; diagnostics go to stderr.  Exit codes:
0 success, 1 failed verification, 2 bad input or artifact.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .checks import Check, epsilon_checks, forest_checks, oracle_checks, routing_checks
from .forest import build_forest
from .generate import FAMILIES, generate
from .graph import GraphError, WeightedGraph, format_distance, load_graph
from .oracle import EpsilonOracle, build, build_epsilon, query, query_epsilon
from .partition import build_fpsdhpp
from .routing import MalformedHeader, build_network_scheme, build_tree_scheme, measure_scheme, simulate_route
from .serialize import (ArtifactError, dump_forest, dump_oracle, dump_scheme, load_any, load_forest,
                        load_oracle, load_scheme, require_graph, unpack)

log = logging.getLogger("ramsey")


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    k: int = 2
    b: int = 4
    eps: float | None = None
    variant: str = "basic"
    seed: int = 0
    verbosity: int = 0

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("--k must be >= 1")
        if self.b < 2:
            raise ValueError("--b must be >= 2")
        if self.eps is not None and not 0 < self.eps < 1:
            raise ValueError("--eps must lie in (0, 1)")


def _read_graph(path: Path) -> WeightedGraph:
    return load_graph(path.read_text())


def _write(out: Path | None, data: bytes | str) -> None:
    if isinstance(data, str):
        data = data.encode()
    if out is None or str(out) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        out.write_bytes(data)
        log.info("wrote %s (%d bytes)", out, len(data))


def _vertex(g: WeightedGraph, ext: int) -> int:
    """Internal index of an input vertex id."""
    try:
        return g.names.index(ext)
    except ValueError:
        raise GraphError(f"unknown vertex {ext}") from None


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- subcommands --------------------------------------------------------------

def cmd_generate(a) -> int:
    _write(a.output, generate(a.family, a.n, a.seed).to_text())
    return 0


def cmd_partition(a) -> int:
    g = _read_graph(a.input)
    U = range(g.n) if a.terminals is None else [_vertex(g, int(x)) for x in a.terminals.split(",")]
    _write(a.output, build_fpsdhpp(g, U, a.k, a.scale).dump())
    return 0


def cmd_oracle_build(a) -> int:
    g = _read_graph(a.input)
    if a.variant == "eps":
        if a.eps is None:
            raise ValueError("--variant eps needs --eps")
        o = build_epsilon(g, a.k, a.eps, a.base)
    else:
        o = build(g, a.k, a.variant)
    _write(a.output, dump_oracle(o, g))
    return 0


def cmd_oracle_query(a) -> int:
    o, g = load_oracle(a.input.read_bytes())
    s, t = _vertex(g, a.s), _vertex(g, a.t)
    est = query_epsilon(o, s, t) if isinstance(o, EpsilonOracle) else query(o, s, t)
    print(format_distance(est))
    return 0


def cmd_trees_build(a) -> int:
    g = _read_graph(a.input)
    _write(a.output, dump_forest(build_forest(g, a.k, keep_runs=False), g))
    return 0


def cmd_trees_stats(a) -> int:
    f, g = load_forest(a.input.read_bytes())
    D = g.all_pairs()
    rows = []
    for i, (T, sur) in enumerate(zip(f.trees, f.survivors)):
        worst = 0.0
        for v in sur:
            td = T.distances_from(v)
            worst = max([worst] + [td[u] / D[v, u] for u in range(g.n) if u != v])
        rad = max(T.distances_from(T.root).values())
        rows.append((i, len(sur), format_distance(worst), format_distance(rad)))
    sys.stdout.write(_csv(rows, ["tree", "survivors", "max_stretch", "radius"]))
    return 0


def cmd_route_build(a) -> int:
    g = _read_graph(a.input)
    f = build_forest(g, a.k, keep_runs=False)
    _write(a.output, dump_scheme(build_network_scheme(g, f, a.b)))
    return 0


def cmd_route_send(a) -> int:
    sch = load_scheme(a.input.read_bytes())
    g = sch.graph
    s, t = _vertex(g, a.s), _vertex(g, a.t)
    decisions: list = []
    path = simulate_route(g, sch, s, t, decisions)
    if a.trace:
        h, _ = sch.label(t)
        rows = [(g.names[v], d.kind, "" if d.port is None else d.port) for v, d in decisions]
        sys.stdout.write(f"# tree {h}\n")
        sys.stdout.write(_csv(rows, ["vertex", "decision", "port"]))
    length = sum(g.weight(x, y) for x, y in zip(path, path[1:]))
    print("hops " + " ".join(str(g.names[v]) for v in path))
    print("length " + format_distance(length))
    return 0


def cmd_route_stats(a) -> int:
    sch = load_scheme(a.input.read_bytes())
    sys.stdout.write(measure_scheme(sch).to_csv())
    return 0


def _verify_rows(blob: bytes, g: WeightedGraph) -> list[Check]:
    kind, body = unpack(blob)
    require_graph(body, g)
    kind, obj, _ = load_any(blob)
    if kind == "oracle":
        if isinstance(obj, EpsilonOracle):
            return epsilon_checks(obj, g)
        return oracle_checks(obj, g)
    if kind == "forest":
        return forest_checks(obj, g)
    # scheme: stored tables must be the ones the forest determines
    fresh = [build_tree_scheme(T, obj.b) for T in obj.forest.trees]
    stale = sum(1 for x, y in zip(fresh, obj.schemes) if x.tables != y.tables or x.labels != y.labels)
    rows = forest_checks(obj.forest, g) + routing_checks(obj)
    rows.append(Check("routing.tables_consistent", stale, 0, stale == 0))
    return rows


def cmd_verify(a) -> int:
    g = _read_graph(a.graph)
    rows = _verify_rows(a.input.read_bytes(), g)
    out = [(c.name, format_distance(float(c.measured)), format_distance(float(c.bound)), c.status)
           for c in rows]
    sys.stdout.write(_csv(out, ["check", "measured", "bound", "status"]))
    failed = [c.name for c in rows if not c.ok]
    if failed:
        print(f"verification failed: {failed[0]}", file=sys.stderr)
        return 1
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ramsey", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def files(sp, out=True):
        sp.add_argument("-i", "--input", type=Path, required=True)
        if out:
            sp.add_argument("-o", "--output", type=Path, default=None)

    g = sub.add_parser("generate", help="emit a seeded graph")
    g.add_argument("--family", choices=FAMILIES, default="random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", type=Path, default=None)
    g.set_defaults(func=cmd_generate)

    pa = sub.add_parser("partition", help="build one hierarchy and dump it as text")
    files(pa)
    pa.add_argument("--k", type=int, default=2)
    pa.add_argument("--scale", type=float, default=1.0)
    pa.add_argument("--terminals", default=None, help="comma-separated vertex ids (default: all)")
    pa.set_defaults(func=cmd_partition)

    o = sub.add_parser("oracle").add_subparsers(dest="action", required=True)
    ob = o.add_parser("build")
    files(ob)
    ob.add_argument("--k", type=int, default=2)
    ob.add_argument("--variant", choices=("basic", "reduced", "eps"), default="basic")
    ob.add_argument("--eps", type=float, default=None)
    ob.add_argument("--base", choices=("basic", "reduced"), default="basic", help="collection type for eps copies")
    ob.set_defaults(func=cmd_oracle_build)
    oq = o.add_parser("query")
    files(oq, out=False)
    oq.add_argument("s", type=int)
    oq.add_argument("t", type=int)
    oq.set_defaults(func=cmd_oracle_query)

    t = sub.add_parser("trees").add_subparsers(dest="action", required=True)
    tb = t.add_parser("build")
    files(tb)
    tb.add_argument("--k", type=int, default=2)
    tb.set_defaults(func=cmd_trees_build)
    ts = t.add_parser("stats")
    files(ts, out=False)
    ts.set_defaults(func=cmd_trees_stats)

    r = sub.add_parser("route").add_subparsers(dest="action", required=True)
    rb = r.add_parser("build")
    files(rb)
    rb.add_argument("--k", type=int, default=2)
    rb.add_argument("--b", type=int, default=4)
    rb.set_defaults(func=cmd_route_build)
    rs = r.add_parser("send")
    files(rs, out=False)
    rs.add_argument("s", type=int)
    rs.add_argument("t", type=int)
    rs.add_argument("--trace", action="store_true")
    rs.set_defaults(func=cmd_route_send)
    rt = r.add_parser("stats")
    files(rt, out=False)
    rt.set_defaults(func=cmd_route_stats)

    v = sub.add_parser("verify", help="check an artifact against its graph")
    files(v, out=False)
    v.add_argument("-g", "--graph", type=Path, required=True)
    v.set_defaults(func=cmd_verify)
    return p


def config_from_args(a: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=" ".join(x for x in (a.command, getattr(a, "action", None)) if x),
        input=getattr(a, "input", None),
        output=getattr(a, "output", None),
        k=getattr(a, "k", 2),
        b=getattr(a, "b", 4),
        eps=getattr(a, "eps", None),
        variant=getattr(a, "variant", "basic"),
        seed=getattr(a, "seed", 0),
        verbosity=a.verbose,
    )
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(a.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(a)
        log.debug("config %s", cfg)
        return a.func(a)
    except (GraphError, ArtifactError, MalformedHeader, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
