"""Level-indexed recombination and mutation operators for permutations."""

from __future__ import annotations

import functools
import itertools
import math
from typing import Sequence

from ..engine import OperatorFamily
from ..errors import DomainError
from .instance import SchedulingInstance
from .jackson import EpsilonPartition, partial_jackson


def recombine(pi: Sequence[int], sigma: Sequence[int], level: int, zeta: Sequence[int]) -> tuple[int, ...]:
    """Keep ``pi[:level]``; order the other jobs by ``zeta`` applied to their order in ``sigma``.

    With ``omega`` the jobs missing from the prefix, listed as they occur in
    ``sigma``, position ``k`` of the suffix receives ``omega[zeta[k]]``.
    """
    n = len(pi)
    if not 0 <= level <= n:
        raise DomainError(f"level {level} outside 0..{n}")
    if sorted(zeta) != list(range(n - level)):
        raise DomainError(f"zeta must permute 0..{n - level - 1}, got {tuple(zeta)}")
    head = tuple(pi[:level])
    kept = set(head)
    omega = [job for job in sigma if job not in kept]
    if len(omega) != n - level:
        raise DomainError("pi and sigma are not permutations of the same jobs")
    return head + tuple(omega[z] for z in zeta)


def mutate(
    instance: SchedulingInstance,
    partition: EpsilonPartition,
    pi: Sequence[int],
    a: int,
    b: int,
    level: int,
) -> tuple[int, ...]:
    """Swap positions ``a`` and ``b`` when one of them holds a long job.

    If the lower of the two positions lies inside the first ``level``
    positions, that stretch is rebuilt from the lower position by the partial
    Jackson rule, with every long job pinned where the swap left it. Jobs past
    ``level`` follow in their previous relative order.
    """
    n = len(pi)
    if not (0 <= a < n and 0 <= b < n):
        raise DomainError(f"positions ({a}, {b}) outside 0..{n - 1}")
    if not 0 <= level <= n:
        raise DomainError(f"level {level} outside 0..{n}")
    long = partition.long
    if pi[a] not in long and pi[b] not in long:
        return tuple(pi)
    swapped = list(pi)
    swapped[a], swapped[b] = swapped[b], swapped[a]
    low = min(a, b)
    if low >= level:
        return tuple(swapped)
    pinned = {h: job for h, job in enumerate(swapped) if h >= low and job in long}
    return partial_jackson(instance, partition, swapped[:low], pinned, level, rest_order=swapped[low:])


class PrefixRecombinationFamily(OperatorFamily):
    """The (n-level)! recombination operators at one level, uniform weights."""

    def __init__(self, n: int, level: int):
        self.n = n
        self.level = level
        self.label = f"recombination[{level}]"

    def __len__(self):
        return math.factorial(self.n - self.level)

    def _op(self, zeta):
        return functools.partial(_recombine_op, level=self.level, zeta=tuple(zeta))

    def sample(self, rng):
        k = self.n - self.level
        return self._op(rng.sample(range(k), k))

    def items(self):
        weight = 1.0 / len(self)
        for zeta in itertools.permutations(range(self.n - self.level)):
            yield self._op(zeta), weight


def _recombine_op(pi, sigma, *, level, zeta):
    return recombine(pi, sigma, level, zeta)


class SwapMutationFamily(OperatorFamily):
    """The n^2 swap-and-repair mutations at one level, uniform weights."""

    def __init__(self, instance: SchedulingInstance, partition: EpsilonPartition, level: int):
        self.instance = instance
        self.partition = partition
        self.level = level
        self.label = f"mutation[{level}]"

    def __len__(self):
        return self.instance.n ** 2

    def _op(self, a, b):
        return functools.partial(mutate, self.instance, self.partition, a=a, b=b, level=self.level)

    def sample(self, rng):
        n = self.instance.n
        return self._op(rng.randrange(n), rng.randrange(n))

    def items(self):
        n = self.instance.n
        weight = 1.0 / n**2
        for a in range(n):
            for b in range(n):
                yield self._op(a, b), weight
