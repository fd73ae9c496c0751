"""Command-line front end.

Exit codes are a stable contract: 0 for yes / valid, 10 for no, 1 for an
invalid solution under ``verify``, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import multiprocessing
import sys
import time
from typing import Optional, Sequence

from .branching import SearchStats, solve_mlce
from .core import MLCE, MODES, TCE, InputError, Instance, Solution, verify
from .fileio import (
    PlantedParams,
    generate_planted_logged,
    parse_formula,
    parse_instance,
    parse_solution,
    generate_sat_reduction,
    serialize_instance,
    serialize_solution,
)
from .kernelize import kernelize
from .oracle import CapabilityError, oracle_mlce, oracle_tce, structured_mlce
from .tcepath import solve_tce_xp

EXIT_YES = 0
EXIT_NO = 10
EXIT_INVALID = 1
EXIT_USAGE = 2

ALGOS = ("auto", "branch", "xp", "oracle", "structured")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layeredit",
                                     description="exact multi-layer / temporal cluster editing")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="decide an instance and emit a solution file")
    p_solve.add_argument("instance")
    p_solve.add_argument("--algo", choices=ALGOS, default="auto")
    p_solve.add_argument("--trace", action="store_true", help="log rule applications to stderr")
    p_solve.add_argument("--out", help="solution file (default: stdout)")

    p_oracle = sub.add_parser("oracle", help="solve by brute force only")
    p_oracle.add_argument("instance")
    p_oracle.add_argument("--out", help="solution file (default: stdout)")

    p_verify = sub.add_parser("verify", help="check a solution file against an instance")
    p_verify.add_argument("instance")
    p_verify.add_argument("solution")

    p_kern = sub.add_parser("kernelize", help="shrink an instance to its kernel")
    p_kern.add_argument("instance")
    p_kern.add_argument("--out", help="output file (default: stdout)")

    p_gen = sub.add_parser("generate", help="emit instances")
    gen_sub = p_gen.add_subparsers(dest="generator", required=True)
    p_planted = gen_sub.add_parser("planted", help="planted clustering with drift and noise")
    p_planted.add_argument("--mode", choices=MODES, default=MLCE)
    p_planted.add_argument("--n", type=int, required=True)
    p_planted.add_argument("--ell", type=int, required=True)
    p_planted.add_argument("--clusters", type=int, required=True)
    p_planted.add_argument("--drift", type=int, default=0)
    p_planted.add_argument("--noise", type=int, default=0)
    p_planted.add_argument("--seed", type=int, default=0)
    p_planted.add_argument("--out", help="instance file (default: stdout)")
    p_sat = gen_sub.add_parser("sat", help="hardness reduction from a (2,2)-3-SAT formula")
    p_sat.add_argument("formula", help="text file, one clause of signed literals per line")
    p_sat.add_argument("--out", help="instance file (default: stdout)")

    p_bench = sub.add_parser("bench", help="parameter sweep, CSV output")
    p_bench.add_argument("--mode", choices=MODES, default=MLCE)
    p_bench.add_argument("--algo", choices=ALGOS, default="auto")
    p_bench.add_argument("--n", type=int, nargs="+", required=True)
    p_bench.add_argument("--ell", type=int, nargs="+", required=True)
    p_bench.add_argument("--k", type=int, nargs="+", required=True)
    p_bench.add_argument("--d", type=int, nargs="+", required=True)
    p_bench.add_argument("--seeds", type=int, default=3)
    p_bench.add_argument("--drift", type=int, default=1)
    p_bench.add_argument("--noise", type=int, default=1)
    p_bench.add_argument("--timeout", type=float, default=30.0,
                         help="wall-clock seconds per instance")
    p_bench.add_argument("--out", help="CSV file (default: stdout)")
    return parser


def run(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "solve":
            return _cmd_solve(args, algo=args.algo, trace=args.trace)
        if args.command == "oracle":
            return _cmd_solve(args, algo="oracle", trace=False)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "kernelize":
            return _cmd_kernelize(args)
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "bench":
            return _cmd_bench(args)
        raise AssertionError(args.command)
    except (InputError, CapabilityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _dispatch(inst: Instance, algo: str, trace: bool) -> tuple[Optional[Solution], SearchStats]:
    stats = SearchStats()
    trace_fn = (lambda line: print(line, file=sys.stderr)) if trace else None
    if algo == "auto":
        algo = "branch" if inst.mode == MLCE else "xp"
    if algo == "branch":
        if inst.mode != MLCE:
            raise InputError("--algo branch requires an mlce instance")
        return solve_mlce(inst, trace=trace_fn, stats=stats), stats
    if algo == "xp":
        if inst.mode != TCE:
            raise InputError("--algo xp requires a tce instance")
        return solve_tce_xp(inst), stats
    if algo == "structured":
        if inst.mode != MLCE:
            raise InputError("--algo structured requires an mlce instance")
        return structured_mlce(inst), stats
    if algo == "oracle":
        solver = oracle_mlce if inst.mode == MLCE else oracle_tce
        return solver(inst), stats
    raise InputError(f"unknown algorithm {algo!r}")


def _cmd_solve(args, algo: str, trace: bool) -> int:
    inst = parse_instance(_read(args.instance))
    sol, _ = _dispatch(inst, algo, trace)
    if sol is not None:
        report = verify(inst, sol)
        if not report.ok:
            print(f"internal error: solver output failed verification:\n{report}",
                  file=sys.stderr)
            return EXIT_INVALID
    _emit(serialize_solution(sol, inst), getattr(args, "out", None))
    return EXIT_YES if sol is not None else EXIT_NO


def _cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution), inst)
    if sol is None:
        raise InputError("solution file declares 'answer no'; nothing to verify")
    report = verify(inst, sol)
    print(report)
    return EXIT_YES if report.ok else EXIT_INVALID


def _cmd_kernelize(args) -> int:
    inst = parse_instance(_read(args.instance))
    result = kernelize(inst)
    if result.is_no:
        _emit("answer no\n", args.out)
        return EXIT_NO
    comments = ["idmap old->new"]
    comments += [f"idmap {old} -> {new if new is not None else 'none'}"
                 for old, new in sorted(result.id_map.items())]
    _emit(serialize_instance(result.reduced, tuple(comments)), args.out)
    return EXIT_YES


def _cmd_generate(args) -> int:
    if args.generator == "planted":
        params = PlantedParams(n=args.n, ell=args.ell, cluster_count=args.clusters,
                               drift_per_layer=args.drift, noise_edits=args.noise,
                               seed=args.seed)
        inst, log = generate_planted_logged(params, args.mode)
        _emit(serialize_instance(inst, log), args.out)
        return EXIT_YES
    if args.generator == "sat":
        formula = parse_formula(_read(args.formula))
        inst = generate_sat_reduction(formula)
        _emit(serialize_instance(inst), args.out)
        return EXIT_YES
    raise AssertionError(args.generator)


def _bench_worker(inst: Instance, algo: str, queue) -> None:
    stats = SearchStats()
    try:
        if algo == "branch":
            sol = solve_mlce(inst, stats=stats)
        elif algo == "xp":
            sol = solve_tce_xp(inst)
        elif algo == "structured":
            sol = structured_mlce(inst)
        elif algo == "oracle":
            sol = oracle_mlce(inst) if inst.mode == MLCE else oracle_tce(inst)
        else:
            raise InputError(f"unknown algorithm {algo!r}")
        queue.put(("yes" if sol is not None else "no", stats.nodes))
    except Exception as exc:  # noqa: BLE001 - reported as a row, not a crash
        queue.put((f"error:{type(exc).__name__}", stats.nodes))


def _cmd_bench(args) -> int:
    algo = args.algo
    rows = []
    ctx = multiprocessing.get_context("fork")
    for n in args.n:
        for ell in args.ell:
            for k in args.k:
                for d in args.d:
                    for seed in range(args.seeds):
                        params = PlantedParams(
                            n=n, ell=ell, cluster_count=max(2, min(n, n // 2 + 1)),
                            drift_per_layer=args.drift, noise_edits=args.noise,
                            seed=seed)
                        inst, _ = generate_planted_logged(params, args.mode)
                        inst = dataclasses.replace(inst, k=k, d=d)
                        resolved = algo
                        if resolved == "auto":
                            resolved = "branch" if inst.mode == MLCE else "xp"
                        queue = ctx.Queue()
                        proc = ctx.Process(target=_bench_worker,
                                           args=(inst, resolved, queue))
                        start = time.perf_counter()
                        proc.start()
                        proc.join(args.timeout)
                        millis = int((time.perf_counter() - start) * 1000)
                        if proc.is_alive():
                            proc.terminate()
                            proc.join()
                            answer, nodes = "timeout", ""
                        else:
                            answer, nodes = queue.get() if not queue.empty() else ("error:lost", "")
                        rows.append([n, ell, k, d, resolved, seed, answer, millis, nodes])
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "ell", "k", "d", "algo", "seed", "answer", "millis",
                     "nodes_expanded"])
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    return EXIT_YES


if __name__ == "__main__":
    main()
