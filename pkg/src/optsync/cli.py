"""Command-line interface.

Exit codes: 0 success / verified, 1 a checked property was violated,
2 usage, input or runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import construct, verify
from .consensus import algebraic_connectivity, simulate_consensus
from .digraph import format_edge_list, parse_graph, to_dot, to_json
from .errors import OptSyncError
from .spectral import (
    char_poly_exact,
    format_spectrum_csv,
    laplacian,
    matches_optimal_spectrum,
    sigma_squared,
    spectrum_numeric,
    spread_parameters,
)

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _num(x) -> str:
    x = float(x)
    return "0" if x == 0 else f"{x:.12g}"


# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    if args.replay:
        trace = construct.parse_trace(_read(args.replay))
        g = construct.replay_trace(trace)
    else:
        if args.n is None or args.m is None:
            raise UsageError("construct needs -n and -m (or --replay TRACE)")
        spec = construct.parse_tree_flag(args.tree, args.n)
        g, trace = construct.build(args.n, args.m, spec)
    if args.trace:
        Path(args.trace).write_text(construct.format_trace(trace))
    if args.format == "edges":
        text = format_edge_list(g)
    elif args.format == "json":
        text = to_json(g) + "\n"
    else:
        text = to_dot(g, name=f"G_{g.n}_{g.m}")
    _emit(text, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    g = parse_graph(_read(args.input))
    if args.mode == "numeric":
        _emit(format_spectrum_csv(spectrum_numeric(laplacian(g), args.tol, method=args.method)), args.out)
    elif args.mode in ("exact", "exact-polynomial"):
        _emit(char_poly_exact(laplacian(g)).to_text() + "\n", args.out)
    else:
        if g.n < 2:
            raise UsageError("spread needs at least 2 vertices")
        s = sigma_squared(spectrum_numeric(laplacian(g), args.tol, method=args.method))
        params = spread_parameters(g.n, g.net_weight)
        optimal = matches_optimal_spectrum(g)
        _emit(f"{_num(s)}, {_num(params.sigma_min_sq)}, {params.kappa}, {str(optimal).lower()}\n", args.out)
    return EXIT_OK


def cmd_trees(args) -> int:
    if args.list:
        lines = []
        for rank, tree in enumerate(construct.enumerate_trees(args.n)):
            if args.format == "parents":
                lines.append(f"{rank} " + " ".join(map(str, construct.tree_parents(tree))))
            else:
                lines.append(f"{rank} " + " ".join(f"{i}:{j}" for i, j in tree.arcs))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        if args.n < 2:
            raise UsageError("n must be at least 2")
        _emit(f"{construct.count_trees(args.n)}\n", args.out)
    return EXIT_OK


def cmd_verify_conjecture(args) -> int:
    n = args.n
    ms = [args.m] if args.m is not None else list(range(0, n * (n - 1) + 1))
    for m in ms:
        if not verify.conjecture_feasible(n, m, args.long_run):
            raise UsageError(
                f"(n={n}, m={m}) is outside the supported range; "
                "n <= 5, or n = 6 with m <= 8 or m >= 22 and --long-run"
            )
    rows, ok = [verify.CONJECTURE_CSV_HEADER], True
    for m in ms:
        r = verify.verify_conjecture(n, m, tol=args.tol, jobs=args.jobs, long_run=args.long_run)
        rows.append(r.csv_row())
        if not r.passed:
            ok = False
            print(f"violation at n={n} m={m}: {r}", file=sys.stderr)
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def _sweep_result(report: verify.SweepReport, out: str | None) -> int:
    for f in report.failures[:50]:
        print(f, file=sys.stderr)
    _emit(f"{verify.SWEEP_CSV_HEADER}\n{report.csv_row()}\n", out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_verify_theorem2(args) -> int:
    report = verify.verify_theorem2_random(args.degree_max, args.coeff_bound, args.trials, args.rng)
    return _sweep_result(report, args.out)


def cmd_verify_theorem3(args) -> int:
    if args.n_max > 25:
        raise UsageError("--n-max must be at most 25")
    report = verify.verify_theorem3(args.n_max, args.seeds, args.rng, jobs=args.jobs)
    return _sweep_result(report, args.out)


def cmd_verify_structure(args) -> int:
    return _sweep_result(verify.verify_structure(), args.out)


def cmd_consensus(args) -> int:
    g = parse_graph(_read(args.input))
    if args.x0:
        try:
            x0 = [float(tok) for tok in _read(args.x0).replace(",", " ").split()]
        except ValueError as exc:
            raise UsageError(f"bad initial state file: {exc}") from None
        if len(x0) != g.n:
            raise UsageError(f"initial state has {len(x0)} entries, graph has {g.n} vertices")
    else:
        x0 = [1.0] + [0.0] * (g.n - 1)
    run = simulate_consensus(g, x0, args.dt, args.steps, args.stride)
    a = algebraic_connectivity(g) if g.n >= 2 else 0.0
    summary = f"algebraic_connectivity={_num(a)} final_disagreement={run.final_disagreement:.6g}"
    if args.out:
        Path(args.out).write_text(run.to_csv())
        print(summary)
    else:
        sys.stdout.write(run.to_csv())
        print(summary, file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="optsync", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build G(n, m) with Algorithm 1")
    p.add_argument("-n", type=int)
    p.add_argument("-m", type=int)
    p.add_argument("--tree", default="star", help="star | path | random:SEED | index:RANK | explicit:1-2,1-3,...")
    p.add_argument("--format", choices=("edges", "json", "dot"), default="edges")
    p.add_argument("--trace", metavar="FILE", help="also write the construction trace")
    p.add_argument("--replay", metavar="TRACE", help="rebuild from a trace file, checking every step")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("spectrum", help="Laplacian spectrum, characteristic polynomial or spread")
    p.add_argument("input", help="graph file (edge list or JSON); '-' for stdin")
    p.add_argument("--mode", choices=("numeric", "exact", "exact-polynomial", "spread"), default="numeric")
    p.add_argument("--method", choices=("poly", "eig"), default="poly")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("trees", help="count or list admissible seed trees")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--list", action="store_true")
    p.add_argument("--format", choices=("arcs", "parents"), default="arcs")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("consensus", help="simulate x' = -Lx on a graph")
    p.add_argument("input", help="graph file; '-' for stdin")
    p.add_argument("--x0", metavar="FILE", help="initial state, n reals (default 1, 0, ..., 0)")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--stride", type=int, default=1, help="record every k-th step")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_consensus)

    p = sub.add_parser("verify", help="brute-force and exact verification sweeps")
    vsub = p.add_subparsers(dest="check", required=True)

    q = vsub.add_parser("conjecture", help="exhaustive minimum spread over all labeled digraphs")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("-m", type=int, help="arc count (default: every m)")
    q.add_argument("--tol", type=float, default=verify.DEFAULT_TOL)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--long-run", action="store_true", help="allow the n = 6 ranges")
    q.add_argument("--out", metavar="FILE")
    q.set_defaults(func=cmd_verify_conjecture)

    q = vsub.add_parser("theorem2", help="random monic integer polynomials against the root-spread bound")
    q.add_argument("--degree-max", type=int, default=8)
    q.add_argument("--coeff-bound", type=int, default=5)
    q.add_argument("--trials", type=int, default=100_000)
    q.add_argument("--rng", type=lambda s: int(s, 0), default=0)
    q.add_argument("--jobs", type=int, default=1, help="accepted for symmetry; this sweep is sequential")
    q.add_argument("--out", metavar="FILE")
    q.set_defaults(func=cmd_verify_theorem2)

    q = vsub.add_parser("theorem3", help="exact characteristic polynomials of Algorithm 1 graphs")
    q.add_argument("--n-max", type=int, default=20)
    q.add_argument("--seeds", type=int, default=3, help="random seed trees per n, on top of star and path")
    q.add_argument("--rng", type=lambda s: int(s, 0), default=0)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--out", metavar="FILE")
    q.set_defaults(func=cmd_verify_theorem3)

    q = vsub.add_parser("structure", help="structural lemmas over every seed tree")
    q.add_argument("--out", metavar="FILE")
    q.set_defaults(func=cmd_verify_structure)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (UsageError, OptSyncError, ValueError, OSError, ArithmeticError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
