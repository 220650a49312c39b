"""Command-line front end.

Exit status: 0 on success (an optimal solution for ``solve``), 2 when a time
or node limit stopped the search, 1 on bad input.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import bench as benchmod
from . import fetch as fetchmod
from . import reductions as red
from .oracle import OracleLimitError, brute_force_bipartition, verify
from .pattern import (
    MatrixMarketError, SolutionError, parse_epsilon, read_matrix_market, serialize_matrix_market,
)
from .solfile import read_solution, write_solution
from .solver import OPTIMAL, SolverConfig, solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_LIMIT = 2


class InputError(Exception):
    pass


def _eps(text: str):
    try:
        return parse_epsilon(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if x < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return x


def _pos_int(text: str) -> int:
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return x


def _name(path: str) -> str:
    base = os.path.basename(path)
    for suffix in (".gz", ".mtx"):
        if base.endswith(suffix):
            base = base[: -len(suffix)]
    return base


def _load_pattern(path: str):
    try:
        return read_matrix_market(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (MatrixMarketError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_graph(path: str):
    try:
        return red.read_graph(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# ------------------------------------------------------------------------ solve


def _solve_one(path: str, eps, time_limit: float, node_limit, out_path, progress: bool):
    """Worker for one matrix; returns ``(exit_code, summary_line, error)``."""
    name = _name(path)
    try:
        p = _load_pattern(path)
        if p.nnz == 0:
            raise InputError(f"{path}: matrix has no nonzeros")
    except InputError as exc:
        return EXIT_INPUT, f"name={name} status=InputError volume=- nodes=0 seconds=0.000", str(exc)
    cfg = SolverConfig(eps=eps, time_limit=time_limit, node_limit=node_limit, progress=progress)
    rep = solve(p, cfg)
    vol = rep.optimal_volume if rep.status == OPTIMAL else rep.incumbent_volume
    line = (f"name={name} status={rep.status} volume={'-' if vol is None else vol} "
            f"nodes={rep.nodes} seconds={rep.elapsed:.3f}")
    if rep.status != OPTIMAL:
        return EXIT_LIMIT, line, None
    if out_path is not None:
        write_solution(out_path, p.m, p.n, rep.incumbent, eps,
                       comments=[f"optimal solution for {name}"])
    return EXIT_OK, line, None


def cmd_solve(args) -> int:
    paths = args.matrices
    outs = [None] * len(paths)
    if args.out is not None:
        if len(paths) == 1 and not os.path.isdir(args.out):
            outs = [args.out]
        else:
            os.makedirs(args.out, exist_ok=True)
            outs = [os.path.join(args.out, _name(p) + ".sol") for p in paths]
    jobs = [(p, args.eps, args.time_limit, args.node_limit, o, args.progress)
            for p, o in zip(paths, outs)]
    codes = []

    def report(code, line, err):
        if err:
            print(f"error: {err}", file=sys.stderr)
        print(line, flush=True)
        codes.append(code)

    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_solve_one, *j) for j in jobs]
            for fut in futures:
                report(*fut.result())
    else:
        for j in jobs:
            report(*_solve_one(*j))
    if EXIT_INPUT in codes:
        return EXIT_INPUT
    return EXIT_LIMIT if EXIT_LIMIT in codes else EXIT_OK


# ------------------------------------------------------------- verify / oracle


def cmd_verify(args) -> int:
    p = _load_pattern(args.matrix)
    try:
        header, sol = read_solution(args.solution)
    except OSError as exc:
        raise InputError(f"cannot read {args.solution}: {exc.strerror or exc}") from None
    except SolutionError as exc:
        raise InputError(f"{args.solution}: {exc}") from None
    eps = args.eps if args.eps is not None else header.eps
    problems = []
    if (header.m, header.n, header.nnz) != (p.m, p.n, p.nnz):
        problems.append(f"header {header.m}x{header.n} with {header.nnz} entries "
                        f"does not match the matrix {p.m}x{p.n} with {p.nnz}")
    rep = verify(p, sol, eps, claimed_volume=header.volume)
    problems.extend(rep.problems)
    if problems:
        for msg in problems:
            print(f"fail: {msg}")
        return EXIT_INPUT
    print(f"pass volume={rep.volume} parts={rep.part_sizes[0]},{rep.part_sizes[1]} eps={eps}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    p = _load_pattern(args.matrix)
    try:
        res = brute_force_bipartition(p, args.eps)
    except OracleLimitError as exc:
        raise InputError(str(exc)) from None
    if res.volume is None:
        print("volume=- (no balanced labeling)")
        return EXIT_INPUT
    print(f"volume={res.volume}")
    if args.out:
        write_solution(args.out, p.m, p.n, res.witness, args.eps, comments=["brute-force witness"])
    return EXIT_OK


# ------------------------------------------------------------------------- gen


def cmd_gen(args) -> int:
    g = _load_graph(args.graph)
    if args.kind == "edge-split":
        text = red.serialize_graph(red.edge_split(g))
    elif args.kind == "clique-expansion":
        try:
            h = red.clique_expansion(g, max_edges=args.max_edges, force=args.force)
        except red.ReductionSizeError as exc:
            raise InputError(str(exc)) from None
        text = red.serialize_graph(h)
    else:
        try:
            text = serialize_matrix_market(red.bipartite_to_pattern(g))
        except ValueError as exc:
            raise InputError(f"{args.graph}: {exc}") from None
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ----------------------------------------------------------------- bench/fetch


def cmd_bench(args) -> int:
    tables = []
    for path, what in ((args.optimal, "optimal"), (args.heuristic, "heuristic")):
        try:
            with open(path) as fh:
                tables.append(benchmod.parse_table(fh.read(), what))
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
        except benchmod.BenchError as exc:
            raise InputError(str(exc)) from None
    thresholds = benchmod.DEFAULT_THRESHOLDS
    if args.thresholds:
        try:
            thresholds = tuple(float(t) for t in args.thresholds.split(","))
        except ValueError:
            raise InputError(f"bad thresholds {args.thresholds!r}") from None
    summary = benchmod.compare(tables[0], tables[1], thresholds)
    sys.stdout.write(benchmod.format_summary(summary))
    for r in summary.records:
        if r.heuristic < r.optimal:
            print(f"warning: {r.name} heuristic volume {r.heuristic} beats the optimum {r.optimal}",
                  file=sys.stderr)
    if summary.only_optimal or summary.only_heuristic:
        return EXIT_INPUT
    return EXIT_OK


def cmd_fetch(args) -> int:
    status = EXIT_OK
    for name in args.names:
        try:
            path = fetchmod.fetch(name, args.dest, args.url_template, group=args.group)
        except (fetchmod.FetchError, MatrixMarketError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = EXIT_INPUT
            continue
        print(f"{name} {path}")
    return status


# ------------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mbipart", description="Optimal sparse matrix bipartitioning.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one or more Matrix Market files to optimality")
    s.add_argument("matrices", nargs="+")
    s.add_argument("--eps", type=_eps, default=parse_epsilon("0.03"),
                   help="load imbalance as a decimal or p/q (default 0.03)")
    s.add_argument("--time-limit", type=_nonneg_float, default=0.0,
                   help="seconds per matrix, 0 for none")
    s.add_argument("--node-limit", type=_pos_int, default=None)
    s.add_argument("--out", help="solution file, or a directory when solving several matrices")
    s.add_argument("--progress", action="store_true", help="print one line per round to stderr")
    s.add_argument("--jobs", type=_pos_int, default=1, help="matrices solved in parallel")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution file against its matrix")
    v.add_argument("matrix")
    v.add_argument("solution")
    v.add_argument("--eps", type=_eps, default=None, help="override the epsilon in the file")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="brute-force optimum of a tiny matrix")
    o.add_argument("matrix")
    o.add_argument("--eps", type=_eps, default=parse_epsilon("0.03"))
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="graph constructions")
    g.add_argument("kind", choices=["edge-split", "clique-expansion", "to-matrix"])
    g.add_argument("graph")
    g.add_argument("--out")
    g.add_argument("--force", action="store_true", help="ignore the clique expansion size cap")
    g.add_argument("--max-edges", type=_pos_int, default=red.DEFAULT_MAX_EXPANSION_EDGES)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="ratio statistics of heuristic against optimal volumes")
    b.add_argument("optimal")
    b.add_argument("heuristic")
    b.add_argument("--thresholds", help="comma-separated profile thresholds")
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("fetch", help="download test matrices")
    f.add_argument("names", nargs="+")
    f.add_argument("--dest", default=".")
    f.add_argument("--url-template", default=fetchmod.DEFAULT_URL_TEMPLATE)
    f.add_argument("--group", help="collection group for names outside the manifest")
    f.set_defaults(func=cmd_fetch)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad flags; that code means "limit reached" here
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
