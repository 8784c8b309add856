"""Population-based hybrid/mixed-strategy EA.

One generation is recombination -> mutation -> selection:

* m ordered parent pairs are drawn independently and uniformly (with or
  without replacement inside a pair); each pair picks a recombination family
  from a rule that may look at the population, the generation index and the
  parents, then an operator inside that family, producing one offspring;
* every offspring position is mutated independently, again choosing a family
  by rule and an operator inside it;
* a selection procedure maps (parents, mutated offspring) to the next
  population of the same size.

The engine knows nothing about genomes. A problem supplies ``evaluate``
returning ``(aux_level, objective)`` (objective is minimised) and
``top_level``.
"""

from __future__ import annotations

import enum
import hashlib
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterator, Mapping, Optional, Protocol, Sequence

from .errors import InvalidPopulationError, StageError, UnsupportedConfigurationError

DISTRIBUTION_TOL = 1e-12


class Problem(Protocol):
    top_level: int

    def evaluate(self, genome) -> tuple[int, Any]:
        ...


@dataclass(frozen=True)
class Individual:
    genome: Hashable
    aux_level: int
    objective: Any


def make_individual(problem: Problem, genome) -> Individual:
    aux, obj = problem.evaluate(genome)
    return Individual(genome, aux, obj)


@dataclass(frozen=True)
class Population:
    members: tuple[Individual, ...]
    generation: int = 0

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[Individual]:
        return iter(self.members)

    def __getitem__(self, idx) -> Individual:
        return self.members[idx]

    @property
    def aux_max(self) -> int:
        return max(x.aux_level for x in self.members)

    @property
    def best_objective(self):
        return min(x.objective for x in self.members)

    def digest(self) -> str:
        text = repr([x.genome for x in self.members]).encode()
        return hashlib.sha1(text).hexdigest()[:16]


def initial_population(problem: Problem, genomes: Sequence) -> Population:
    return Population(tuple(make_individual(problem, g) for g in genomes), 0)


class OperatorFamily:
    """A finite family of operators with a within-family distribution.

    Subclasses provide ``sample(rng)``; enumerable ones also provide
    ``items()`` yielding ``(operator, probability)``.
    """

    label = "family"

    def sample(self, rng):
        raise NotImplementedError

    def items(self):
        raise UnsupportedConfigurationError(f"{self.label} cannot be enumerated")


class FiniteFamily(OperatorFamily):
    def __init__(self, operators: Sequence[Callable], weights: Optional[Sequence[float]] = None, label="family"):
        if not operators:
            raise ValueError("a family needs at least one operator")
        self.operators = tuple(operators)
        if weights is None:
            weights = [1.0 / len(self.operators)] * len(self.operators)
        check_distribution(dict(enumerate(weights)))
        self.weights = tuple(weights)
        self.label = label

    def __len__(self):
        return len(self.operators)

    def sample(self, rng):
        if len(self.operators) == 1:
            return self.operators[0]
        return rng.choices(self.operators, weights=self.weights)[0]

    def items(self):
        return zip(self.operators, self.weights)


class SampledFamily(OperatorFamily):
    """A family known only through a sampler; never enumerable."""

    def __init__(self, sampler: Callable, label="sampled"):
        self.sampler = sampler
        self.label = label

    def sample(self, rng):
        return self.sampler(rng)


class PairSampling(enum.Enum):
    WITH_REPLACEMENT = "with_replacement"
    WITHOUT_REPLACEMENT = "without_replacement"


RecombinationRule = Callable[[Population, int, Individual, Individual], Mapping[int, float]]
MutationRule = Callable[[Population, int, Individual], Mapping[int, float]]
SelectionRule = Callable[[Sequence[Individual], Sequence[Individual]], Sequence[Individual]]


def level_of_first_parent(population, t, first, second):
    return {first.aux_level: 1.0}


def level_of_individual(population, t, individual):
    return {individual.aux_level: 1.0}


@dataclass(frozen=True)
class StrategyProfile:
    recombination_families: Mapping[int, OperatorFamily]
    mutation_families: Mapping[int, OperatorFamily]
    selection: SelectionRule
    recombination_rule: RecombinationRule = level_of_first_parent
    mutation_rule: MutationRule = level_of_individual
    pair_sampling: PairSampling = PairSampling.WITHOUT_REPLACEMENT
    selection_name: str = field(default="custom")


def check_distribution(dist: Mapping[Any, float]) -> Mapping[Any, float]:
    total = sum(dist.values())
    if abs(total - 1.0) > DISTRIBUTION_TOL or any(p < 0 for p in dist.values()):
        raise ValueError(f"not a probability distribution (sum={total!r}): {dict(dist)}")
    return dist


def sample_index(dist: Mapping[Any, float], rng):
    check_distribution(dist)
    if len(dist) == 1:
        return next(iter(dist))
    keys = list(dist)
    return rng.choices(keys, weights=[dist[k] for k in keys])[0]


def ordered_pairs(m: int, mode: PairSampling) -> list[tuple[int, int]]:
    """Support of one pair draw."""
    if mode is PairSampling.WITH_REPLACEMENT:
        return [(i, j) for i in range(m) for j in range(m)]
    return [(i, j) for i in range(m) for j in range(m) if i != j]


def sample_recombination_pairs(population: Population | Sequence, mode: PairSampling, rng) -> list[tuple[int, int]]:
    """m independent uniform ordered index pairs."""
    m = len(population)
    if m < 2 and mode is PairSampling.WITHOUT_REPLACEMENT:
        raise InvalidPopulationError(f"without-replacement pairs need m >= 2, got m={m}")
    if m < 1:
        raise InvalidPopulationError("empty population")
    pairs = []
    for _ in range(m):
        i = rng.randrange(m)
        if mode is PairSampling.WITH_REPLACEMENT:
            j = rng.randrange(m)
        else:
            j = rng.randrange(m - 1)
            if j >= i:
                j += 1
        pairs.append((i, j))
    return pairs


def _family(families, index, kind):
    try:
        return families[index]
    except KeyError:
        raise KeyError(f"no {kind} family with index {index}") from None


def recombination_stage(population: Population, strategy: StrategyProfile, problem: Problem, rng) -> list[Individual]:
    pairs = sample_recombination_pairs(population, strategy.pair_sampling, rng)
    offspring = []
    for pos, (i, j) in enumerate(pairs):
        first, second = population[i], population[j]
        try:
            w = sample_index(strategy.recombination_rule(population, population.generation, first, second), rng)
            op = _family(strategy.recombination_families, w, "recombination").sample(rng)
            offspring.append(make_individual(problem, op(first.genome, second.genome)))
        except Exception as exc:
            raise StageError("recombination", pos, exc) from exc
    return offspring


def mutation_stage(population: Population, offspring: Sequence[Individual], strategy: StrategyProfile, problem: Problem, rng) -> list[Individual]:
    mutated = []
    for pos, child in enumerate(offspring):
        try:
            w = sample_index(strategy.mutation_rule(population, population.generation, child), rng)
            op = _family(strategy.mutation_families, w, "mutation").sample(rng)
            genome = op(child.genome)
            mutated.append(child if genome == child.genome else make_individual(problem, genome))
        except Exception as exc:
            raise StageError("mutation", pos, exc) from exc
    return mutated


def step_generation(population: Population, strategy: StrategyProfile, problem: Problem, rng, check_caches=False) -> Population:
    if len(population) < 2:
        raise InvalidPopulationError(f"population size must be >= 2, got {len(population)}")
    offspring = recombination_stage(population, strategy, problem, rng)
    mutated = mutation_stage(population, offspring, strategy, problem, rng)
    try:
        survivors = tuple(strategy.selection(population.members, mutated))
    except Exception as exc:
        raise StageError("selection", -1, exc) from exc
    if len(survivors) != len(population):
        raise StageError("selection", -1, f"returned {len(survivors)} individuals, expected {len(population)}")
    if check_caches:
        for x in survivors:
            assert (x.aux_level, x.objective) == tuple(problem.evaluate(x.genome)), x
    return Population(survivors, population.generation + 1)


def hybrid_elitist_select(parents: Sequence[Individual], offspring: Sequence[Individual]) -> list[Individual]:
    """Keep the best auxiliary level and the best objective of parents + offspring.

    Slot one takes a top-level individual (best objective among those), slot
    two the best-objective individual if it is a different one; the rest is
    truncation on (level desc, objective asc), stable in pool order.
    """
    if len(parents) != len(offspring):
        raise InvalidPopulationError(f"size mismatch: {len(parents)} parents, {len(offspring)} offspring")
    pool = list(parents) + list(offspring)
    m = len(parents)
    order = sorted(range(len(pool)), key=lambda k: (-pool[k].aux_level, pool[k].objective, k))
    top = order[0]
    best = min(range(len(pool)), key=lambda k: (pool[k].objective, -pool[k].aux_level, k))
    chosen = [top] if best == top else [top, best]
    chosen += [k for k in order if k not in chosen][: m - len(chosen)]
    return [pool[k] for k in chosen[:m]]


@dataclass(frozen=True)
class GenerationRecord:
    t: int
    aux_max: int
    best_objective: Any
    digest: str


@dataclass
class RunTrace:
    seed: Any
    records: list[GenerationRecord] = field(default_factory=list)
    aux_hit: Optional[int] = None
    satisfactory_hit: Optional[int] = None
    final: Optional[Population] = None

    @property
    def generations(self) -> int:
        return self.records[-1].t if self.records else 0

    def is_monotone(self) -> bool:
        return all(b.aux_max >= a.aux_max and b.best_objective <= a.best_objective
                   for a, b in zip(self.records, self.records[1:]))


def run(
    initial: Population,
    strategy: StrategyProfile,
    problem: Problem,
    *,
    budget: int,
    satisfactory: Optional[Callable[[Individual], bool]] = None,
    rng=None,
    seed=None,
    until_top_level=False,
    check_caches=False,
) -> RunTrace:
    """Iterate generations until a member is satisfactory or ``budget`` runs out.

    Pass either a ``random.Random``-like ``rng`` or a ``seed``. With
    ``until_top_level`` the run also keeps going until AuxMax reaches the
    problem's top level, so both hitting times get measured.
    """
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    if rng is None:
        rng = random.Random(seed)
    trace = RunTrace(seed=seed)
    pop = initial

    def record(p):
        trace.records.append(GenerationRecord(p.generation, p.aux_max, p.best_objective, p.digest()))
        if trace.aux_hit is None and p.aux_max >= problem.top_level:
            trace.aux_hit = p.generation
        if trace.satisfactory_hit is None and satisfactory is not None and any(map(satisfactory, p.members)):
            trace.satisfactory_hit = p.generation

    record(pop)
    for _ in range(budget):
        if trace.satisfactory_hit is not None and (trace.aux_hit is not None or not until_top_level):
            break
        pop = step_generation(pop, strategy, problem, rng, check_caches=check_caches)
        record(pop)
    trace.final = pop
    return trace
