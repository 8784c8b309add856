"""Long-job partition, the partial Jackson rule and the auxiliary fitness.

A repositioning map ``phi`` sends each long job to a distinct schedule
position. A schedule is (k, eps, phi)-Jackson when each of its first k
positions either holds the long job pinned there by ``phi`` or, at an
unpinned position, holds an available short job of maximal delivery time.
"Available" means unscheduled, short and released by

    t_h = max(a(h-1), earliest release among the unscheduled short jobs)

where a(h-1) is the completion time of the previous position, so the machine
waits for the next release when nothing is ready (the classical extended
Jackson / Schrage rule).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from ..errors import DomainError
from .instance import Number, SchedulingInstance, exact


@dataclass(frozen=True)
class EpsilonPartition:
    eps: Number
    threshold: Number  # eps * P_total
    long: frozenset[int]


def long_jobs(instance: SchedulingInstance, eps) -> EpsilonPartition:
    eps = exact(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    total = instance.total_processing
    threshold = eps * total
    if total == 0:
        # every p_i = 0 >= threshold would make all jobs long; none of them is
        long = frozenset()
    else:
        long = frozenset(i for i, job in enumerate(instance.jobs) if job.processing >= threshold)
    assert len(long) <= math.floor(1 / Fraction(eps)), (len(long), eps)
    return EpsilonPartition(eps, threshold, long)


def repositioning_maps(n: int, partition: EpsilonPartition) -> Iterator[dict[int, int]]:
    """All injective maps from the long jobs to positions 0..n-1."""
    longs = sorted(partition.long)
    for positions in itertools.permutations(range(n), len(longs)):
        yield dict(zip(longs, positions))


def count_repositioning_maps(n: int, partition: EpsilonPartition) -> int:
    return math.perm(n, len(partition.long))


def _available(instance, pending_short, clock):
    """Short jobs released by the time the machine can next start one."""
    jobs = instance.jobs
    earliest = min(jobs[u].release for u in pending_short)
    now = clock if clock > earliest else earliest
    return [u for u in pending_short if jobs[u].release <= now]


def _jackson_ok(instance, pending_short, clock, job_id) -> bool:
    ready = _available(instance, pending_short, clock)
    if job_id not in ready:
        return False
    jobs = instance.jobs
    return jobs[job_id].delivery == max(jobs[u].delivery for u in ready)


def jackson_prefix_level(
    instance: SchedulingInstance,
    partition: EpsilonPartition,
    phi: Mapping[int, int],
    perm: Sequence[int],
) -> int:
    """f_phi(perm): the largest k such that perm is (k, eps, phi)-Jackson.

    Implemented literally from the predicate; 0 when position 0 already fails.
    """
    if set(phi) != set(partition.long):
        raise DomainError("phi must be defined exactly on the long jobs")
    if len(set(phi.values())) != len(phi):
        raise DomainError("phi must be injective")
    pinned = {pos: job for job, pos in phi.items()}
    jobs = instance.jobs
    pending_short = {u for u in range(instance.n) if u not in partition.long}
    clock: Number = 0
    for h, job_id in enumerate(perm):
        if h in pinned:
            if job_id != pinned[h]:
                return h
        elif job_id in partition.long or not _jackson_ok(instance, pending_short, clock, job_id):
            return h
        pending_short.discard(job_id)
        job = jobs[job_id]
        clock = max(clock, job.release) + job.processing
    return len(perm)


def aux_fitness_max(instance: SchedulingInstance, partition: EpsilonPartition, perm: Sequence[int]) -> int:
    """auxFit(perm) = max over phi of f_phi(perm), in one left-to-right scan.

    A long job at position h is always consistent with some phi (pin it at h,
    the unplaced long jobs go to later positions). A short job must pass the
    Jackson test, which depends only on the prefix. So the level is the
    length of the longest prefix whose short jobs all pass.
    """
    jobs = instance.jobs
    long = partition.long
    pending_short = {u for u in range(instance.n) if u not in long}
    clock: Number = 0
    for h, job_id in enumerate(perm):
        if job_id not in long:
            if not _jackson_ok(instance, pending_short, clock, job_id):
                return h
            pending_short.discard(job_id)
        job = jobs[job_id]
        clock = max(clock, job.release) + job.processing
    return len(perm)


def aux_fitness_by_enumeration(instance: SchedulingInstance, partition: EpsilonPartition, perm: Sequence[int]) -> int:
    """max over an explicit enumeration of phi (oracle for the scan)."""
    return max(jackson_prefix_level(instance, partition, phi, perm)
               for phi in repositioning_maps(instance.n, partition))


def partial_jackson(
    instance: SchedulingInstance,
    partition: EpsilonPartition,
    prefix: Sequence[int],
    pinned: Mapping[int, int],
    stop: int,
    rest_order: Sequence[int] = (),
) -> tuple[int, ...]:
    """Extend ``prefix`` by the partial Jackson rule up to position ``stop``.

    ``pinned`` maps positions to long jobs. Ties on delivery time go to the
    smallest job index. Jobs left over after ``stop`` are appended in their
    order in ``rest_order`` (any job missing from it follows in index order).
    """
    n = instance.n
    jobs = instance.jobs
    out = list(prefix)
    used = set(out)
    pending_short = {u for u in range(n) if u not in partition.long and u not in used}
    clock: Number = 0
    for job_id in out:
        clock = max(clock, jobs[job_id].release) + jobs[job_id].processing
    for h in range(len(out), stop):
        if h in pinned:
            job_id = pinned[h]
        else:
            if not pending_short:
                raise DomainError(f"no short job left for unpinned position {h}")
            ready = _available(instance, pending_short, clock)
            best = max(jobs[u].delivery for u in ready)
            job_id = min(u for u in ready if jobs[u].delivery == best)
            pending_short.discard(job_id)
        if job_id in used:
            raise DomainError(f"job {job_id} placed twice")
        out.append(job_id)
        used.add(job_id)
        clock = max(clock, jobs[job_id].release) + jobs[job_id].processing
    tail = [u for u in rest_order if u not in used]
    seen = set(tail)
    tail += [u for u in range(n) if u not in used and u not in seen]
    return tuple(out + tail)


def jackson_schedule(instance: SchedulingInstance, partition: EpsilonPartition, phi: Mapping[int, int]) -> tuple[int, ...]:
    """The complete phi-Jackson schedule with smallest-index tie breaking."""
    pinned = {pos: job for job, pos in phi.items()}
    return partial_jackson(instance, partition, (), pinned, instance.n)


def jackson_schedules(instance: SchedulingInstance, partition: EpsilonPartition, phi: Mapping[int, int]) -> Iterator[tuple[int, ...]]:
    """Every schedule with f_phi = n (all tie-breaking branches)."""
    pinned = {pos: job for job, pos in phi.items()}
    jobs = instance.jobs
    n = instance.n

    def extend(prefix, pending_short, clock):
        h = len(prefix)
        if h == n:
            yield tuple(prefix)
            return
        if h in pinned:
            choices = [pinned[h]]
        else:
            ready = _available(instance, pending_short, clock)
            best = max(jobs[u].delivery for u in ready)
            choices = [u for u in sorted(ready) if jobs[u].delivery == best]
        for job_id in choices:
            job = jobs[job_id]
            yield from extend(prefix + [job_id], pending_short - {job_id},
                              max(clock, job.release) + job.processing)

    short = frozenset(u for u in range(n) if u not in partition.long)
    yield from extend([], short, 0)
