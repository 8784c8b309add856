"""Instance generation, experiment orchestration and reports.

Report files written by :func:`write_report`:

``runs.csv``
    First line ``# generated: <UTC timestamp>`` (the only non-reproducible
    line), then a header and one comma-separated row per seed with columns
    ``seed, n, long_jobs, j_star, initial_aux_max, aux_hit, satisfactory_hit,
    generations, best_lateness, ratio, monotone``. Missing hits are empty.

``summary.json``
    ``config`` (echo), ``theory`` (drift sum over all levels, walk term
    ``constant * n**(2 + 1/eps)``, budget), ``aggregate`` (success rate,
    hit statistics) and ``failures`` (violated checks when verifying).
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import yaml

from .drift import DriftLevelTable, measure_empirical_hitting_times, variable_drift_bound
from .engine import PairSampling, RunTrace, run
from .errors import ConfigError
from .exact import DEFAULT_LIMIT, optimum_lateness
from .scheduling.instance import SchedulingInstance, exact, format_number
from .scheduling.problem import SchedulingProblem, improvement_probabilities, scheduling_strategy

log = logging.getLogger(__name__)

STRATEGIES = ("partial-jackson",)


@dataclass(frozen=True)
class GeneratorParams:
    n: int = 8
    release: tuple[int, int] = (0, 60)
    processing: tuple[int, int] = (1, 10)
    delivery: tuple[int, int] = (0, 60)
    long_jobs: int = 0
    long_processing: tuple[int, int] = (30, 60)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.long_jobs <= self.n:
            raise ConfigError(f"long_jobs must lie in 0..n, got {self.long_jobs}")
        for name in ("release", "processing", "delivery", "long_processing"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo:
                raise ConfigError(f"{name} range must satisfy 0 <= lo <= hi, got ({lo}, {hi})")
            object.__setattr__(self, name, (int(lo), int(hi)))


def generate_instance(params: GeneratorParams, seed: int) -> SchedulingInstance:
    """Integer times drawn uniformly from the configured inclusive ranges.

    The first ``long_jobs`` draws take their processing time from
    ``long_processing``; job order is then shuffled.
    """
    rng = random.Random(seed)
    triples = []
    for k in range(params.n):
        p_range = params.long_processing if k < params.long_jobs else params.processing
        triples.append((rng.randint(*params.release), rng.randint(*p_range), rng.randint(*params.delivery)))
    rng.shuffle(triples)
    return SchedulingInstance.from_triples(triples)


@dataclass(frozen=True)
class ExperimentConfig:
    eps: Union[int, Fraction] = 1
    m: int = 4
    budget: Union[int, str] = "auto"
    budget_factor: float = 10.0
    seeds: tuple[int, ...] = (1,)
    instance_file: Optional[str] = None
    generator: Optional[GeneratorParams] = None
    strategy: str = "partial-jackson"
    pair_sampling: str = "without_replacement"
    out_dir: Optional[str] = None
    verify: bool = False
    success_threshold: float = 0.95
    exact_limit: int = DEFAULT_LIMIT
    walk_constant: float = 1.0
    until_top_level: bool = True
    workers: int = 1

    def __post_init__(self):
        try:
            object.__setattr__(self, "eps", exact(self.eps))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad eps {self.eps!r}") from exc
        if self.eps <= 0:
            raise ConfigError("eps must be > 0")
        if self.m < 2:
            raise ConfigError("population size m must be >= 2")
        if self.budget != "auto" and (not isinstance(self.budget, int) or self.budget < 0):
            raise ConfigError(f"budget must be a non-negative integer or 'auto', got {self.budget!r}")
        if (self.instance_file is None) == (self.generator is None):
            raise ConfigError("give exactly one of instance_file or generator")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        try:
            PairSampling(self.pair_sampling)
        except ValueError as exc:
            raise ConfigError(f"bad pair_sampling {self.pair_sampling!r}") from exc
        if not self.seeds:
            raise ConfigError("seed list is empty")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))

    def echo(self) -> dict:
        out = asdict(self)
        out["eps"] = format_number(self.eps)
        out["seeds"] = list(self.seeds)
        if self.generator is not None:
            out["generator"] = {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self.generator).items()}
        return out


def _parse_seeds(value) -> tuple[int, ...]:
    if isinstance(value, int):
        return (value,)
    if isinstance(value, str):
        lo, sep, hi = value.partition("..")
        try:
            return tuple(range(int(lo), int(hi) + 1)) if sep else (int(value),)
        except ValueError as exc:
            raise ConfigError(f"seeds must be an integer or a range 'a..b', got {value!r}") from exc
    if isinstance(value, dict):
        return tuple(range(int(value["start"]), int(value["stop"]) + 1))
    return tuple(int(s) for s in value)


def config_from_mapping(data: dict) -> ExperimentConfig:
    data = dict(data or {})
    kwargs = {}
    instance = data.pop("instance", None) or {}
    if "file" in instance:
        kwargs["instance_file"] = str(instance["file"])
    if "generator" in instance:
        gen = {k: tuple(v) if isinstance(v, list) else v for k, v in instance["generator"].items()}
        try:
            kwargs["generator"] = GeneratorParams(**gen)
        except TypeError as exc:
            raise ConfigError(f"bad generator parameters: {exc}") from exc
    if "seeds" in data:
        kwargs["seeds"] = _parse_seeds(data.pop("seeds"))
    if "eps" in data:
        kwargs["eps"] = str(data.pop("eps"))
    known = {f for f in ExperimentConfig.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs.update(data)
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    """Read a YAML (or JSON) experiment config; relative instance paths resolve against the file."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    config = config_from_mapping(data)
    if config.instance_file and not Path(config.instance_file).is_absolute():
        config = replace(config, instance_file=str(path.parent / config.instance_file))
    return config


# -- theory ---------------------------------------------------------------------

@dataclass(frozen=True)
class Theory:
    drift_sum: float  # sum of 1/l_k(m) over all n levels
    walk_term: float  # constant * n**(2 + 1/eps)
    budget: int


def theory_for(n: int, config: ExperimentConfig) -> Theory:
    table = DriftLevelTable.from_floors(config.m, *improvement_probabilities(n))
    drift_sum = variable_drift_bound(table, table.M)
    walk = config.walk_constant * float(n) ** (2 + 1 / float(config.eps))
    if config.budget == "auto":
        budget = int(config.budget_factor * (drift_sum + walk))
    else:
        budget = config.budget
    return Theory(drift_sum, walk, budget)


# -- runs -----------------------------------------------------------------------

@dataclass(frozen=True)
class RunRow:
    seed: int
    n: int
    long_jobs: int
    j_star: Optional[Fraction]
    initial_aux_max: int
    aux_hit: Optional[int]
    satisfactory_hit: Optional[int]
    generations: int
    best_lateness: Fraction
    ratio: Optional[Fraction]
    monotone: bool
    theory: Theory = field(compare=False, repr=False)


def instance_for(config: ExperimentConfig, seed: int) -> SchedulingInstance:
    if config.instance_file is not None:
        try:
            return SchedulingInstance.load(config.instance_file)
        except OSError as exc:
            raise ConfigError(f"cannot read instance {config.instance_file}: {exc}") from exc
    return generate_instance(config.generator, seed)


def run_seed(config: ExperimentConfig, seed: int) -> tuple[RunRow, RunTrace]:
    instance = instance_for(config, seed)
    j_star = None
    if instance.n <= config.exact_limit:
        j_star = optimum_lateness(instance, limit=config.exact_limit).j_star
    problem = SchedulingProblem(instance, config.eps, j_star)
    strategy = scheduling_strategy(problem, config.pair_sampling)
    theory = theory_for(instance.n, config)
    rng = random.Random(f"ea-run:{seed}")
    pop = problem.random_population(config.m, rng)
    trace = run(
        pop, strategy, problem,
        budget=theory.budget,
        satisfactory=problem.is_satisfactory if j_star is not None else None,
        rng=rng,
        seed=seed,
        until_top_level=config.until_top_level,
    )
    best = trace.final.best_objective
    row = RunRow(
        seed=seed,
        n=instance.n,
        long_jobs=len(problem.partition.long),
        j_star=j_star,
        initial_aux_max=trace.records[0].aux_max,
        aux_hit=trace.aux_hit,
        satisfactory_hit=trace.satisfactory_hit,
        generations=trace.generations,
        best_lateness=best,
        ratio=Fraction(best) / j_star if j_star else None,
        monotone=trace.is_monotone(),
        theory=theory,
    )
    return row, trace


def _run_seed_row(args):
    config, seed = args
    return run_seed(config, seed)[0]


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[RunRow]
    failures: list[str] = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return sum(r.satisfactory_hit is not None for r in self.rows) / len(self.rows)

    def aggregate(self) -> dict:
        summary = measure_empirical_hitting_times(self.rows)
        return {
            "runs": len(self.rows),
            "success_rate": self.success_rate,
            "top_level_hit": asdict(summary.top_level),
            "satisfactory_hit": asdict(summary.satisfactory),
            "all_monotone": all(r.monotone for r in self.rows),
        }

    def theory(self) -> dict:
        by_n = {}
        for r in self.rows:
            by_n[str(r.n)] = asdict(r.theory)
        return by_n

    def summary(self) -> dict:
        return {
            "config": self.config.echo(),
            "theory": self.theory(),
            "aggregate": self.aggregate(),
            "failures": list(self.failures),
        }

    def rows_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["seed", "n", "long_jobs", "j_star", "initial_aux_max", "aux_hit",
                         "satisfactory_hit", "generations", "best_lateness", "ratio", "monotone"])
        for r in self.rows:
            writer.writerow([
                r.seed, r.n, r.long_jobs,
                "" if r.j_star is None else format_number(r.j_star),
                r.initial_aux_max,
                "" if r.aux_hit is None else r.aux_hit,
                "" if r.satisfactory_hit is None else r.satisfactory_hit,
                r.generations,
                format_number(r.best_lateness),
                "" if r.ratio is None else f"{float(r.ratio):.6f}",
                int(r.monotone),
            ])
        return buf.getvalue()


def verify_report(report: ExperimentReport) -> list[str]:
    """Checks enabled by ``verify``; returns human-readable failures."""
    cfg = report.config
    eps = Fraction(cfg.eps)
    failures = []
    if report.success_rate < cfg.success_threshold:
        failures.append(f"success rate {report.success_rate:.3f} < {cfg.success_threshold}")
    for r in report.rows:
        if not r.monotone:
            failures.append(f"seed {r.seed}: trace not monotone")
        if r.ratio is not None and r.ratio < 1:
            failures.append(f"seed {r.seed}: ratio {float(r.ratio)} < 1")
        if r.satisfactory_hit is not None and r.ratio is not None and r.ratio > 1 + eps:
            failures.append(f"seed {r.seed}: successful run with ratio {float(r.ratio)} > 1+eps")
    hits = [r.aux_hit for r in report.rows if r.aux_hit is not None]
    if hits:
        mean = sum(hits) / len(hits)
        bound = max(r.theory.drift_sum for r in report.rows)
        if mean > bound:
            failures.append(f"mean top-level hit {mean:.3f} exceeds drift bound {bound:.3f}")
    return failures


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_run_seed_row, [(config, s) for s in config.seeds]))
    else:
        rows = []
        for seed in config.seeds:
            rows.append(run_seed(config, seed)[0])
            log.debug("seed %s done", seed)
    report = ExperimentReport(config, rows)
    if config.verify:
        report.failures = verify_report(report)
    if config.out_dir:
        write_report(report, config.out_dir)
    return report


def write_report(report: ExperimentReport, out_dir) -> None:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        (out / "runs.csv").write_text(f"# generated: {stamp}\n" + report.rows_csv())
        (out / "summary.json").write_text(json.dumps(report.summary(), indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {out}: {exc}") from exc


def write_instances(params: GeneratorParams, seeds, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for seed in seeds:
        path = out / f"instance_n{params.n}_s{seed}.txt"
        generate_instance(params, seed).save(path)
        paths.append(path)
    return paths
