"""Command-line front end: ``relaxround {solve,bench,convert,ratio,gen-hard,oracle}``."""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import hardgen, instance, oracle, ratios, rounding, solver
from .greedy import greedy_select
from .objective import coverage_discrete
from .reward import RewardError, parse_reward

DEFAULT_EPSILON = 0.01


def _load_instance(args):
    if getattr(args, "snap", None):
        return instance.build_symmetric_bipartite(instance.load_snap_edgelist(args.snap))
    if getattr(args, "hard", None):
        return hardgen.generate_hard_instance(args.hard).instance
    if not getattr(args, "instance", None):
        raise instance.InstanceError("one of --instance, --snap or --hard is required")
    return instance.load_native(args.instance)


def run_pipeline(inst, reward, k, *, epsilon=DEFAULT_EPSILON, eta=None, eta_scale=None,
                 tol=solver.DEFAULT_TOL, max_iter=None, early_stop=True, rounds=1, seed=0):
    """Greedy, accelerated solve and best-of-``rounds`` swap rounding.

    Returns ``(report_dict, solve_report)``. Timings live under ``seconds``
    keys; everything else depends only on the inputs and ``seed``.
    """
    t0 = time.perf_counter()
    g = greedy_select(inst, reward, k)
    t_greedy = time.perf_counter() - t0
    g_value = coverage_discrete(inst, reward, g.selected)

    t1 = time.perf_counter()
    point, rep = solver.accelerated_solve(
        inst, reward, k, epsilon, eta=eta, eta_scale=eta_scale, tol=tol,
        max_iter=max_iter, early_stop=early_stop, greedy=g,
    )
    t_solve = time.perf_counter() - t1

    t2 = time.perf_counter()
    rng = np.random.default_rng(seed)
    kk = min(int(k), inst.n)
    if kk == 0:
        S, r_value = [], 0.0
    else:
        S, r_value, _ = rounding.round_best_of(inst, reward, point.x, rounds, rng, k=kk)
    t_round = time.perf_counter() - t2

    report = {
        "config": {
            "k": int(k),
            "reward": reward.spec(),
            "epsilon": epsilon,
            "eta": eta,
            "eta_scale": eta_scale,
            "tol": tol,
            "max_iter": max_iter,
            "early_stop": early_stop,
            "rounds": rounds,
            "seed": seed,
            "n": inst.n,
            "r": inst.r,
            "m": inst.m,
        },
        "greedy": {"value": g_value, "seconds": t_greedy, "set": sorted(g.selected)},
        "solve": {
            "value": rep.best_value,
            "smooth_value": rep.best_smooth_value,
            "final_value": rep.final_value,
            "iters": rep.iterations,
            "mu": rep.mu,
            "eta": rep.eta,
            "T": rep.T,
            "eta_mode": rep.eta_mode,
            "stopped_early": rep.stopped_early,
            "degenerate": rep.degenerate,
            "seconds": t_solve,
        },
        "round": {"value": r_value, "trials": rounds, "seconds": t_round},
        "set": sorted(int(i) for i in S),
    }
    return report, rep


def strip_timings(obj):
    """Copy of a report without any ``seconds`` entries (for determinism checks)."""
    if isinstance(obj, dict):
        return {k: strip_timings(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [strip_timings(v) for v in obj]
    return obj


def cmd_solve(args):
    inst = _load_instance(args)
    reward = parse_reward(args.reward)
    report, rep = run_pipeline(
        inst, reward, args.k, epsilon=args.epsilon, eta=args.eta, eta_scale=args.eta_scale,
        tol=args.tol, max_iter=args.max_iter, early_stop=not args.no_early_stop,
        rounds=args.rounds, seed=args.seed,
    )
    if args.trace:
        report["trace"] = {"smooth_value": rep.smooth_trace, "true_value": rep.true_trace}
    if args.format == "csv":
        sys.stdout.write(rep.trace_csv())
    else:
        print(json.dumps(report, indent=2))
    return 0


BENCH_HEADER = "instance,k,c_or_reward,stage,mean_seconds,std_seconds,objective"
STAGES = ("greedy", "solve", "round", "total")


def bench_rows(named_instances, ks, rewards, trials=3, stages=("total",), **solve_kw):
    """One CSV row per (instance, k, reward, stage), timings over ``trials`` runs."""
    rows = []
    for name, inst in named_instances:
        for k in ks:
            for reward in rewards:
                secs = {s: [] for s in STAGES}
                objective = {}
                for _ in range(trials):
                    rep, _ = run_pipeline(inst, reward, k, **solve_kw)
                    secs["greedy"].append(rep["greedy"]["seconds"])
                    secs["solve"].append(rep["solve"]["seconds"])
                    secs["round"].append(rep["round"]["seconds"])
                    secs["total"].append(sum(secs[s][-1] for s in ("greedy", "solve", "round")))
                    objective = {
                        "greedy": rep["greedy"]["value"],
                        "solve": rep["solve"]["value"],
                        "round": rep["round"]["value"],
                        "total": rep["round"]["value"],
                    }
                for stage in stages:
                    ts = secs[stage]
                    std = statistics.stdev(ts) if len(ts) > 1 else 0.0
                    rows.append(
                        f"{name},{k},{reward.spec()},{stage},{statistics.fmean(ts):.6f},"
                        f"{std:.6f},{objective[stage]!r}"
                    )
    return rows


def cmd_bench(args):
    named = []
    for p in args.instance or []:
        named.append((Path(p).stem, instance.load_native(p)))
    for p in args.snap or []:
        named.append((Path(p).stem, instance.build_symmetric_bipartite(instance.load_snap_edgelist(p))))
    for c in args.hard or []:
        named.append((f"hard_c{c}", hardgen.generate_hard_instance(c).instance))
    if not named:
        raise instance.InstanceError("bench needs at least one --instance, --snap or --hard")
    rewards = [parse_reward(s) for s in args.reward]
    stages = tuple(s.strip() for s in args.stages.split(","))
    for s in stages:
        if s not in STAGES:
            raise ValueError(f"unknown stage {s!r}; choose from {', '.join(STAGES)}")
    rows = bench_rows(
        named, args.k, rewards, trials=args.trials, stages=stages,
        epsilon=args.epsilon, eta=args.eta, eta_scale=args.eta_scale, tol=args.tol,
        max_iter=args.max_iter, rounds=args.rounds, seed=args.seed,
    )
    print(BENCH_HEADER)
    for row in rows:
        print(row)
    return 0


def cmd_convert(args):
    if args.snap:
        inst = instance.build_symmetric_bipartite(instance.load_snap_edgelist(args.snap))
    else:
        inst = instance.load_native(args.instance)
    instance.save_native(inst, args.out)
    print(json.dumps(instance.describe(inst)))
    return 0


def cmd_ratio(args):
    reward = parse_reward(args.reward)
    if args.curve:
        print("x,alpha")
        for x, a in ratios.alpha_curve(reward, args.limit):
            print(f"{x},{a:.{args.digits}f}")
        return 0
    res = ratios.alpha_search(reward, args.limit)
    print(f"{res.value:.{args.digits}f}")
    if res.at_boundary:
        print(f"warning: minimum found at the search limit x={res.argmin}", file=sys.stderr)
    return 0


def cmd_gen_hard(args):
    hard = hardgen.generate_hard_instance(args.c)
    instance.save_native(hard.instance, args.out)
    sidecar = Path(str(args.out) + ".json")
    sidecar.write_text(json.dumps(hard.sidecar(), indent=2) + "\n")
    print(json.dumps({"instance": str(args.out), "sidecar": str(sidecar), **hard.sidecar()}))
    return 0


def cmd_oracle(args):
    inst = _load_instance(args)
    reward = parse_reward(args.reward)
    value, S = oracle.brute_force_opt(inst, reward, args.k)
    print(json.dumps({"opt_value": value, "set": S}))
    return 0


def _add_solver_flags(p):
    p.add_argument("--reward", default="min:c=1", help="reward spec, e.g. min:c=2, log, pow:gamma=0.5")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    eta = p.add_mutually_exclusive_group()
    eta.add_argument("--eta", type=float, help="absolute step size")
    eta.add_argument("--eta-scale", type=float, help="multiplier on the step size 4*mu/d_R")
    p.add_argument("--tol", type=float, default=solver.DEFAULT_TOL)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--rounds", type=int, default=1, help="best-of-N swap rounding")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="relaxround", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="greedy + accelerated relax-and-round")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance", help="native instance file")
    src.add_argument("--snap", help="SNAP edge list (symmetric bipartite transform)")
    src.add_argument("--hard", type=int, metavar="C", help="generated hard instance")
    p.add_argument("--k", type=int, required=True)
    _add_solver_flags(p)
    p.add_argument("--no-early-stop", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--trace", action="store_true", help="include objective traces in the JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="timing table over instances and budgets")
    p.add_argument("--instance", action="append")
    p.add_argument("--snap", action="append")
    p.add_argument("--hard", type=int, action="append", metavar="C")
    p.add_argument("--k", type=int, nargs="+", required=True)
    _add_solver_flags(p)
    p.set_defaults(reward=None)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--stages", default="total", help="comma list of greedy,solve,round,total")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convert", help="SNAP edge list to native format")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--snap")
    src.add_argument("--instance")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("ratio", help="Poisson concavity ratio of a reward")
    p.add_argument("--reward", required=True)
    p.add_argument("--limit", type=int, help="search limit / curve length")
    p.add_argument("--curve", action="store_true", help="emit x,alpha(x) CSV")
    p.add_argument("--digits", type=int, default=4)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("gen-hard", help="write a hard multi-coverage instance")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_hard)

    p = sub.add_parser("oracle", help="brute-force optimum of a small instance")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance")
    src.add_argument("--snap")
    src.add_argument("--hard", type=int, metavar="C")
    p.add_argument("--reward", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and not args.reward:
        args.reward = ["min:c=1"]
    elif args.command == "bench":
        args.reward = [args.reward] if isinstance(args.reward, str) else args.reward
    if args.command == "ratio" and args.curve and args.limit is None:
        args.limit = 20
    try:
        return args.func(args)
    except (instance.InstanceError, RewardError, ValueError, OSError,
            rounding.RoundingError, solver.SolverError, hardgen.ConstructionError,
            oracle.OracleBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
