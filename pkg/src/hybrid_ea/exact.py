"""Brute-force optimum J* for small scheduling instances."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import OracleOverflowError
from .scheduling.instance import Number, SchedulingInstance, lateness

DEFAULT_LIMIT = 10


@dataclass(frozen=True)
class OptimumResult:
    j_star: Number
    witness: tuple[int, ...]
    nodes: int


def optimum_lateness(instance: SchedulingInstance, limit: int = DEFAULT_LIMIT, prune: bool = True) -> OptimumResult:
    """Exact minimum of the maximal lateness over all n! orders.

    With ``prune`` a depth-first search cuts a prefix once its lower bound
    reaches the incumbent. The bound is the larger of the lateness already
    realised by the prefix and ``completion + remaining work + min remaining
    delivery``; neither can be undercut by any completion. Without ``prune``
    every permutation is evaluated (the self-check route).
    """
    n = instance.n
    if n > limit:
        raise OracleOverflowError(f"n={n} exceeds the exact-solver limit {limit}")
    if not prune:
        best_perm, best, nodes = None, None, 0
        for perm in itertools.permutations(range(n)):
            nodes += 1
            value = lateness(instance, perm)
            if best is None or value < best:
                best, best_perm = value, perm
        return OptimumResult(best, best_perm, nodes)

    jobs = instance.jobs
    # incumbent: identity order, improved as the search proceeds
    best_perm = tuple(range(n))
    best = lateness(instance, best_perm)
    nodes = 0
    prefix: list[int] = []
    remaining = set(range(n))

    def search(clock, realised, work_left):
        nonlocal best, best_perm, nodes
        nodes += 1
        if not remaining:
            if realised < best:
                best, best_perm = realised, tuple(prefix)
            return
        bound = max(realised, clock + work_left + min(jobs[u].delivery for u in remaining))
        if bound >= best:
            return
        # most urgent deliveries first: finds good incumbents early
        for u in sorted(remaining, key=lambda u: (-jobs[u].delivery, u)):
            job = jobs[u]
            done = max(clock, job.release) + job.processing
            prefix.append(u)
            remaining.discard(u)
            search(done, max(realised, done + job.delivery), work_left - job.processing)
            remaining.add(u)
            prefix.pop()

    search(0, 0, instance.total_processing)
    return OptimumResult(best, best_perm, nodes)
