"""Exhaustive checks of the design conditions on small instances."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .instance import Number, SchedulingInstance, lateness
from .jackson import (
    EpsilonPartition,
    count_repositioning_maps,
    jackson_schedules,
    long_jobs,
    repositioning_maps,
)
from .operators import mutate

MAX_N = 8
MAX_LONG = 2


@dataclass(frozen=True)
class TopLevelSummary:
    best_lateness: Number
    best_schedule: tuple[int, ...]
    schedules: int
    # min over phi of the worst top-level schedule of that phi
    best_worst_case: Number


def top_level_schedules(instance: SchedulingInstance, partition: EpsilonPartition):
    """Yield (phi, schedule) for every schedule with f_phi = n."""
    for phi in repositioning_maps(instance.n, partition):
        for sched in jackson_schedules(instance, partition, phi):
            yield phi, sched


def summarize_top_level(instance: SchedulingInstance, eps) -> TopLevelSummary:
    partition = long_jobs(instance, eps)
    best = best_sched = None
    worst_by_phi: dict[tuple, Number] = {}
    count = 0
    for phi, sched in top_level_schedules(instance, partition):
        count += 1
        value = lateness(instance, sched)
        if best is None or value < best:
            best, best_sched = value, sched
        key = tuple(sorted(phi.items()))
        worst_by_phi[key] = max(worst_by_phi.get(key, value), value)
    return TopLevelSummary(best, best_sched, count, min(worst_by_phi.values()))


def _phi_class(partition, sched):
    return tuple(sorted((job, pos) for pos, job in enumerate(sched) if job in partition.long))


@dataclass(frozen=True)
class DesignReport:
    n: int
    eps: Number
    long_jobs: tuple[int, ...]
    phi_count: int
    phi_bound: float  # n ** (1/eps)
    levels: tuple[int, int]
    j_star: Optional[Number]
    top_level_best: Optional[Number]
    condition1: bool
    condition2: bool
    condition3: Optional[bool]
    condition4: Optional[bool]
    partial: bool

    def as_dict(self):
        def conv(v):
            if isinstance(v, Fraction):
                return float(v)
            if isinstance(v, tuple):
                return [conv(x) for x in v]
            return v
        return {k: conv(v) for k, v in self.__dict__.items()}


def condition4_reachability(instance: SchedulingInstance, partition: EpsilonPartition) -> bool:
    """Every top-level schedule reaches every phi-class via top-level swap mutations."""
    n = instance.n
    nodes = {sched for _, sched in top_level_schedules(instance, partition)}
    classes = {_phi_class(partition, s) for s in nodes}
    if len(classes) <= 1:
        return True
    for start in nodes:
        seen = {start}
        reached = {_phi_class(partition, start)}
        queue = deque([start])
        while queue and len(reached) < len(classes):
            cur = queue.popleft()
            for a in range(n):
                for b in range(n):
                    nxt = mutate(instance, partition, cur, a, b, n)
                    if nxt not in seen:
                        seen.add(nxt)
                        reached.add(_phi_class(partition, nxt))
                        queue.append(nxt)
        if len(reached) < len(classes):
            return False
    return True


def check_design_conditions(instance: SchedulingInstance, eps, j_star: Optional[Number] = None) -> DesignReport:
    partition = long_jobs(instance, eps)
    n = instance.n
    phi_count = count_repositioning_maps(n, partition)
    phi_bound = float(n) ** (1 / float(partition.eps))
    feasible = n <= MAX_N and len(partition.long) <= MAX_LONG
    cond3 = cond4 = best = None
    if feasible:
        if j_star is None:
            from ..exact import optimum_lateness  # exact imports scheduling

            j_star = optimum_lateness(instance).j_star
        best = summarize_top_level(instance, eps).best_lateness
        cond3 = best <= (1 + Fraction(partition.eps)) * j_star
        cond4 = condition4_reachability(instance, partition)
    return DesignReport(
        n=n,
        eps=partition.eps,
        long_jobs=tuple(sorted(partition.long)),
        phi_count=phi_count,
        phi_bound=phi_bound,
        levels=(0, n),
        j_star=j_star,
        top_level_best=best,
        condition1=phi_count <= phi_bound + 1e-9,
        condition2=True,  # f_phi maps into the integers 0..n by construction
        condition3=cond3,
        condition4=cond4,
        partial=not feasible,
    )
