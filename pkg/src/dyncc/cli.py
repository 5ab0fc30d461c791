"""Command line front end: ``dyncc run | gen | bench | experiment``.

Graph files hold ``vertices <id>...`` lines (repeatable) and ``edge+ <u> <v>``
lines; every undeclared pair is negative. Ops files hold one of ``flip u v``,
``add v`` or ``del v`` per line. ``#`` starts a comment in both formats.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from dyncc.engine import AddVertex, DeleteVertex, Engine, EngineConfig, FlipSign, Operation
from dyncc.errors import DuplicateEdge, ParseError, UnknownVertex
from dyncc.graph import Epsilon, SignedGraph, edge_key
from dyncc.harness import (
    ExperimentConfig,
    GeneratorParams,
    gen_ops,
    gen_planted,
    run_benchmark,
    run_experiment,
    run_ops,
)

SCHEMA = "dyncc.report/1"
EXIT_OK, EXIT_DIVERGED, EXIT_INPUT = 0, 1, 2


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if line:
            yield lineno, line


def _vertex_id(tok: str, lineno: int) -> int:
    if not tok.isdigit():
        raise ParseError(lineno, f"vertex id {tok!r} is not an unsigned integer")
    return int(tok)


def parse_graph(text: str) -> SignedGraph:
    g = SignedGraph()
    for lineno, toks in _tokens(text):
        head, args = toks[0], toks[1:]
        if head == "vertices":
            for tok in args:
                v = _vertex_id(tok, lineno)
                if v in g:
                    raise ParseError(lineno, f"vertex {v} declared twice")
                g.add_vertex(v)
        elif head == "edge+":
            if len(args) != 2:
                raise ParseError(lineno, "edge+ takes exactly two vertex ids")
            u, v = (_vertex_id(t, lineno) for t in args)
            if u == v:
                raise ParseError(lineno, f"self loop on {u}")
            for x in (u, v):
                if x not in g:
                    raise UnknownVertex(lineno, f"vertex {x} not declared")
            if g.has_positive(u, v):
                raise DuplicateEdge(lineno, f"edge {edge_key(u, v)} listed twice")
            g.flip(u, v)
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    return g


def serialize_graph(g: SignedGraph) -> str:
    """Canonical text: one sorted ``vertices`` line, then edges with ``u < v``."""
    lines = []
    if len(g):
        lines.append("vertices " + " ".join(map(str, g)))
    lines.extend(f"edge+ {u} {v}" for u, v in g.positive_edges())
    return "".join(line + "\n" for line in lines)


_ARITY = {"flip": 2, "add": 1, "del": 1}


def parse_ops(text: str) -> list[Operation]:
    ops: list[Operation] = []
    for lineno, toks in _tokens(text):
        head, args = toks[0], toks[1:]
        if head not in _ARITY:
            raise ParseError(lineno, f"unknown operation {head!r}")
        if len(args) != _ARITY[head]:
            raise ParseError(lineno, f"{head} takes {_ARITY[head]} argument(s)")
        ids = [_vertex_id(t, lineno) for t in args]
        if head == "flip":
            if ids[0] == ids[1]:
                raise ParseError(lineno, f"self loop on {ids[0]}")
            ops.append(FlipSign(*ids))
        elif head == "add":
            ops.append(AddVertex(ids[0]))
        else:
            ops.append(DeleteVertex(ids[0]))
    return ops


def serialize_ops(ops: Sequence[Operation]) -> str:
    return "".join(f"{op}\n" for op in ops)


@dataclass
class RunConfig:
    graph_path: Path
    ops_path: Path | None
    eps: str = "7/10"
    pruning: str = "corrected"
    maintenance: str = "frontier"
    neighborhood: str = "open"
    check: bool = False
    strict: bool = False
    report_path: Path | None = None
    seed: int | None = None


def _write_json(obj: dict, path: Path | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_run(cfg: RunConfig) -> int:
    try:
        eps = Epsilon.parse(cfg.eps)
        engine_cfg = EngineConfig(eps, cfg.pruning, cfg.maintenance, cfg.neighborhood)
        g = parse_graph(Path(cfg.graph_path).read_text())
        ops = parse_ops(Path(cfg.ops_path).read_text()) if cfg.ops_path else []
    except (OSError, ValueError) as exc:
        print(f"dyncc: {exc}", file=sys.stderr)
        return EXIT_INPUT
    engine = Engine(g, engine_cfg)
    result = run_ops(engine, ops, check=cfg.check, seed=cfg.seed)
    steps = result.steps
    report = {
        "schema": SCHEMA,
        "config": dict(engine_cfg.to_dict(), graph=str(cfg.graph_path),
                       ops=str(cfg.ops_path) if cfg.ops_path else None,
                       check=cfg.check, strict=cfg.strict, seed=cfg.seed),
        "steps": [s.to_dict() for s in steps],
        "totals": {
            "steps": len(steps),
            "applied": sum(s.applied for s in steps),
            "rejected": sum(not s.applied for s in steps),
            "na_evaluations": sum(s.na_evaluations for s in steps),
            "init_na_evaluations": engine.counters()["init_na_evaluations"],
            "baseline_na_evaluations": sum(result.baseline_evaluations),
            "mismatches": sum(s.baseline_match is False for s in steps),
            "clusters": len(engine.clustering()),
            "cost": engine.cost(),
        },
        "witnesses": [w.to_dict() for w in result.witnesses],
    }
    try:
        _write_json(report, cfg.report_path)
    except OSError as exc:
        print(f"dyncc: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.check and cfg.strict and result.witnesses:
        return EXIT_DIVERGED
    return EXIT_OK


def cmd_gen(params: GeneratorParams, graph_out: Path, ops_out: Path | None) -> int:
    g = gen_planted(params)
    try:
        Path(graph_out).write_text(serialize_graph(g))
        if ops_out is not None:
            Path(ops_out).write_text(serialize_ops(gen_ops(params, g)))
    except OSError as exc:
        print(f"dyncc: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_bench(g: SignedGraph, ops: Sequence[Operation], cfg: EngineConfig,
              report_path: Path | None) -> int:
    bench = run_benchmark(g, ops, cfg)
    try:
        _write_json({"schema": SCHEMA, "config": cfg.to_dict(), **bench.to_dict()}, report_path)
    except OSError as exc:
        print(f"dyncc: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def _mode_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", default="7/10", help="exact rational P/Q")
    p.add_argument("--pruning", choices=("corrected", "paper-strict", "safe"), default="corrected")
    p.add_argument("--maintenance", choices=("frontier", "paper-strict"), default="frontier")
    p.add_argument("--neighborhood", choices=("open", "closed"), default="open")
    p.add_argument("--report", type=Path, default=None, help="JSON output path (stdout if omitted)")
    p.add_argument("--seed", type=int, default=0)


def _gen_flags(p: argparse.ArgumentParser, n: int, k: int, p_: str, q: str, ops: int,
               count_flag: str = "--ops") -> None:
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--k", type=int, default=k)
    p.add_argument("--p", default=p_, help="intra-block positive probability P/Q")
    p.add_argument("--q", default=q, help="inter-block positive probability P/Q")
    p.add_argument(count_flag, dest="op_count", type=int, default=ops)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dyncc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="apply an ops file to a graph and report every step")
    run.add_argument("--graph", type=Path, required=True)
    run.add_argument("--ops", type=Path)
    run.add_argument("--check", action="store_true", help="compare with the baseline after each step")
    run.add_argument("--strict", action="store_true", help="exit 1 on any divergence (with --check)")
    _mode_flags(run)

    gen = sub.add_parser("gen", help="write a planted-partition graph and an ops stream")
    _gen_flags(gen, 20, 2, "4/5", "1/10", 100)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--graph-out", type=Path, default=Path("graph.txt"))
    gen.add_argument("--ops-out", type=Path, default=Path("ops.txt"))
    gen.add_argument("--mix", default="8,1,1", help="flip,add,delete weights")

    bench = sub.add_parser("bench", help="online engine vs per-step baseline recomputation")
    bench.add_argument("--graph", type=Path)
    bench.add_argument("--ops", type=Path)
    _gen_flags(bench, 1000, 10, "3/10", "1/100", 200, count_flag="--flips")
    _mode_flags(bench)

    exp = sub.add_parser("experiment", help="seeded randomized workloads checked against the baseline")
    exp.add_argument("--seeds", type=int, default=100, help="number of seeds, starting at --seed")
    exp.add_argument("--length", type=int, default=100)
    exp.add_argument("--audit", action="store_true")
    _mode_flags(exp)
    return parser


def _params(args, mix=(8, 1, 1)) -> GeneratorParams:
    return GeneratorParams(n=args.n, k=args.k, p=Fraction(args.p), q=Fraction(args.q),
                           op_count=args.op_count, op_mix=mix, seed=args.seed)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(RunConfig(args.graph, args.ops, args.epsilon, args.pruning,
                                     args.maintenance, args.neighborhood, args.check,
                                     args.strict, args.report, args.seed))
        if args.command == "gen":
            mix = tuple(int(x) for x in args.mix.split(","))
            return cmd_gen(_params(args, mix), args.graph_out, args.ops_out)
        cfg = EngineConfig(Epsilon.parse(args.epsilon), args.pruning, args.maintenance,
                           args.neighborhood)
        if args.command == "bench":
            if args.graph:
                g = parse_graph(args.graph.read_text())
                ops = parse_ops(args.ops.read_text()) if args.ops else []
            else:
                params = _params(args, (1, 0, 0))
                g = gen_planted(params)
                ops = gen_ops(params, g)
            return cmd_bench(g, ops, cfg, args.report)
        seeds = range(args.seed, args.seed + args.seeds)
        exp = ExperimentConfig(seeds, cfg.pruning, cfg.maintenance, cfg.neighborhood,
                               op_count=args.length, audit=args.audit)
        report = run_experiment(exp)
        _write_json({"schema": SCHEMA, **report.to_dict()}, args.report)
        return EXIT_DIVERGED if report.witnesses else EXIT_OK
    except (OSError, ValueError) as exc:
        print(f"dyncc: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
