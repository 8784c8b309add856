"""Command line entry point: ``hybrid-ea {generate,run,bounds,oracle}``."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import asdict, replace
from fractions import Fraction

from . import drift, schema
from .engine import PairSampling
from .errors import HybridEAError
from .exact import optimum_lateness
from .harness import (
    ExperimentConfig,
    GeneratorParams,
    load_config,
    run_experiment,
    write_instances,
    _parse_seeds,
)
from .scheduling.instance import SchedulingInstance, exact, format_number
from .scheduling.problem import SchedulingProblem, improvement_probabilities, scheduling_strategy


def _num(value):
    if isinstance(value, Fraction):
        return format_number(value)
    return value


def _print_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True, default=_num))


def cmd_generate(args):
    params = GeneratorParams(
        n=args.n,
        release=tuple(args.release),
        processing=tuple(args.processing),
        delivery=tuple(args.delivery),
        long_jobs=args.long_jobs,
        long_processing=tuple(args.long_processing),
    )
    for path in write_instances(params, _parse_seeds(args.seed), args.out):
        print(path)
    return 0


def cmd_run(args):
    if args.config:
        config = load_config(args.config)
    else:
        if not args.instance:
            raise SystemExit("run: pass --config or --instance")
        config = ExperimentConfig(instance_file=args.instance)
    overrides = {}
    if args.seed is not None:
        overrides["seeds"] = _parse_seeds(args.seed)
    if args.eps is not None:
        overrides["eps"] = exact(args.eps)
    if args.pop_size is not None:
        overrides["m"] = args.pop_size
    if args.budget is not None:
        overrides["budget"] = args.budget if args.budget == "auto" else int(args.budget)
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.verify:
        overrides["verify"] = True
    if args.workers is not None:
        overrides["workers"] = args.workers
    config = replace(config, **overrides)
    report = run_experiment(config)
    sys.stdout.write(report.rows_csv())
    _print_json({"aggregate": report.aggregate(), "theory": report.theory(), "failures": report.failures})
    return 1 if report.failures else 0


def cmd_bounds(args):
    out = {}
    m = args.pop_size
    if args.P is not None:
        inp = schema.SchemaBoundInput(m=m, P=args.P, pr_preserve=args.pr_preserve, pr_create=args.pr_create,
                                      delta=args.delta, eps=args.chernoff_eps)
        lower, upper = schema.chernoff_count_bounds(args.P, m, args.delta)
        out["chernoff"] = {"lower_tail": lower, "upper_tail": upper}
        out["mu_lower_bound"] = schema.mu_lower_bound(inp)
        out["after_mutation_tail_bound"] = schema.after_mutation_tail_bound(inp)
    n = args.n
    table = drift.DriftLevelTable.from_floors(m, *improvement_probabilities(n))
    limit = drift.DriftLevelTable.from_floors(m, *improvement_probabilities(n), limit=True)
    start = n if args.start_distance is None else args.start_distance
    eps = float(exact(args.eps))
    report = drift.total_runtime_bound(table, start, n, gamma=2.0, lam=1.0 / eps, constant=args.walk_constant)
    out["levels"] = {"l_k(m)": list(table.bounds), "l_k": list(limit.bounds)}
    out["variable_drift_bound"] = drift.variable_drift_bound(table, start)
    out["variable_drift_bound_m_free"] = drift.variable_drift_bound(limit, start)
    out["runtime"] = asdict(report)
    _print_json(out)
    return 0


def cmd_oracle(args):
    if args.kind == "exact":
        inst = SchedulingInstance.load(args.instance)
        res = optimum_lateness(inst, limit=args.limit)
        _print_json({"j_star": res.j_star, "witness": list(res.witness), "nodes": res.nodes})
    elif args.kind == "hitting":
        chain = drift.ChainSpec.load(args.chain)
        times = drift.exact_expected_hitting_time(chain)
        out = {"expected_hitting_time": {chain.labels[s]: t for s, t in times.items()}}
        try:
            out["drift_bound"] = {chain.labels[s]: drift.chain_drift_bound(chain, s) for s in range(chain.size)}
        except HybridEAError as exc:
            out["drift_bound"] = f"not applicable: {exc}"
        _print_json(out)
    else:
        inst = SchedulingInstance.load(args.instance)
        problem = SchedulingProblem(inst, exact(args.eps))
        strategy = scheduling_strategy(problem, PairSampling(args.pair_sampling))
        pop = problem.random_population(args.pop_size, random.Random(args.seed))
        level = pop.aux_max + 1 if args.level is None else args.level
        target = schema.level_schema(level)
        dist = schema.exact_count_distribution(target, pop, strategy, problem, stage=args.stage)
        avg = schema.average_success_probability(target, pop, strategy.pair_sampling, strategy, problem)
        _print_json({
            "population": [list(x.genome) for x in pop],
            "aux_levels": [x.aux_level for x in pop],
            "schema": target.label,
            "stage": args.stage,
            "distribution": list(dist.probabilities),
            "position_marginals": list(dist.position_marginals),
            "average_success_probability": avg,
        })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybrid-ea", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write random instance files")
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--seed", default="1", help="seed or range a..b")
    g.add_argument("--release", type=int, nargs=2, default=[0, 60], metavar=("LO", "HI"))
    g.add_argument("--processing", type=int, nargs=2, default=[1, 10], metavar=("LO", "HI"))
    g.add_argument("--delivery", type=int, nargs=2, default=[0, 60], metavar=("LO", "HI"))
    g.add_argument("--long-jobs", type=int, default=0)
    g.add_argument("--long-processing", type=int, nargs=2, default=[30, 60], metavar=("LO", "HI"))
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run an experiment")
    r.add_argument("--config")
    r.add_argument("--instance")
    r.add_argument("--seed", help="seed or range a..b (overrides config)")
    r.add_argument("--eps")
    r.add_argument("--pop-size", type=int)
    r.add_argument("--budget", help="generation budget or 'auto'")
    r.add_argument("--out")
    r.add_argument("--workers", type=int)
    r.add_argument("--verify", action="store_true", help="exit non-zero when a check fails")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bounds", help="print schema and runtime bounds")
    b.add_argument("--n", type=int, default=8)
    b.add_argument("--pop-size", type=int, default=4)
    b.add_argument("--eps", default="1", help="approximation slack")
    b.add_argument("--start-distance", type=int)
    b.add_argument("--walk-constant", type=float, default=1.0)
    b.add_argument("--P", type=float, help="average success probability (enables Chernoff output)")
    b.add_argument("--delta", type=float, default=0.5)
    b.add_argument("--chernoff-eps", type=float, default=0.5)
    b.add_argument("--pr-preserve", type=float, default=1.0)
    b.add_argument("--pr-create", type=float, default=0.0)
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", help="brute-force cross-checks")
    o.add_argument("kind", choices=["exact", "hitting", "counts"])
    o.add_argument("--instance")
    o.add_argument("--chain")
    o.add_argument("--limit", type=int, default=10)
    o.add_argument("--eps", default="1")
    o.add_argument("--pop-size", type=int, default=3)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--level", type=int)
    o.add_argument("--stage", choices=["recombination", "mutation"], default="recombination")
    o.add_argument("--pair-sampling", choices=[p.value for p in PairSampling], default="without_replacement")
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (HybridEAError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
