"""Problem hooks and the level-indexed strategy for the scheduling design."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from ..engine import (
    Individual,
    PairSampling,
    Population,
    StrategyProfile,
    hybrid_elitist_select,
    initial_population,
)
from .instance import Number, SchedulingInstance, lateness
from .jackson import aux_fitness_max, long_jobs
from .operators import PrefixRecombinationFamily, SwapMutationFamily


class SchedulingProblem:
    """Evaluates permutations: auxiliary level plus maximal lateness.

    Evaluations are memoised per genome; the instance is immutable, so one
    problem object can be shared by any number of runs.
    """

    def __init__(self, instance: SchedulingInstance, eps, j_star: Optional[Number] = None):
        self.instance = instance
        self.partition = long_jobs(instance, eps)
        self.eps = self.partition.eps
        self.j_star = j_star
        self.top_level = instance.n
        self._cache: dict[tuple, tuple[int, Number]] = {}

    @property
    def n(self):
        return self.instance.n

    def evaluate(self, genome):
        hit = self._cache.get(genome)
        if hit is None:
            hit = (aux_fitness_max(self.instance, self.partition, genome), lateness(self.instance, genome))
            self._cache[genome] = hit
        return hit

    @property
    def threshold(self) -> Number:
        if self.j_star is None:
            raise ValueError("J* unknown: pass j_star to judge satisfactory schedules")
        return (1 + Fraction(self.eps)) * self.j_star

    def is_satisfactory(self, individual: Individual) -> bool:
        return satisfactory(individual.objective, self.eps, self.j_star)

    def random_population(self, m: int, rng: random.Random) -> Population:
        genomes = []
        for _ in range(m):
            perm = list(range(self.n))
            rng.shuffle(perm)
            genomes.append(tuple(perm))
        return initial_population(self, genomes)


def satisfactory(value: Number, eps, j_star: Number) -> bool:
    """J_pi <= (1 + eps) J*."""
    if j_star is None or j_star <= 0:
        raise ValueError(f"J* must be positive, got {j_star!r}")
    return value <= (1 + Fraction(eps)) * j_star


def scheduling_strategy(problem: SchedulingProblem, pair_sampling=PairSampling.WITHOUT_REPLACEMENT) -> StrategyProfile:
    n = problem.n
    rec = {level: PrefixRecombinationFamily(n, level) for level in range(n + 1)}
    mut = {level: SwapMutationFamily(problem.instance, problem.partition, level) for level in range(n + 1)}
    return StrategyProfile(
        recombination_families=rec,
        mutation_families=mut,
        selection=hybrid_elitist_select,
        pair_sampling=PairSampling(pair_sampling),
        selection_name="hybrid-elitist",
    )


def improvement_probabilities(n: int) -> tuple[list[float], list[float]]:
    """Design floors per level k = 0..n-1: recombination 1/(n-k), mutation 1."""
    return [1.0 / (n - k) for k in range(n)], [1.0] * n
