"""Schema survival probabilities, Chernoff-type bounds and exact count oracles.

For a subset S of the search space and a population x, N(S, y) counts the
members of a population y lying in S. The functions here give

* the per-position probability that recombination (or mutation) lands in S,
* lower/upper tail bounds on N(S, .) after recombination and after mutation,
* the small-count bound for "at least one member of S",
* the exact distribution of N(S, .) by enumeration, and a Monte Carlo
  estimate that drives the engine's own stage functions.

All bound outputs are clamped to [0, 1].
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .engine import (
    Individual,
    PairSampling,
    Population,
    StrategyProfile,
    check_distribution,
    make_individual,
    mutation_stage,
    ordered_pairs,
    recombination_stage,
)
from .errors import DomainError, OracleOverflowError

MAX_ATOMS = 10**7


@dataclass(frozen=True)
class SchemaPredicate:
    test: Callable[[Individual], bool]
    label: str = "S"

    def __call__(self, individual: Individual) -> bool:
        return bool(self.test(individual))


def level_schema(level: int) -> SchemaPredicate:
    """S_q: individuals whose auxiliary level is at least ``level``."""
    return SchemaPredicate(lambda x: x.aux_level >= level, f"S_{level}")


def _unit(name, value):
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


def _clamp(value: float) -> float:
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class SchemaBoundInput:
    m: int
    P: float
    pr_preserve: float
    pr_create: float
    delta: float
    eps: float
    alpha: float = 1.0
    beta: float = 1.0
    count_S0: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise DomainError(f"m must be >= 1, got {self.m}")
        for name in ("P", "pr_preserve", "pr_create", "delta", "eps", "alpha", "beta"):
            _unit(name, getattr(self, name))
        if not 0 <= self.count_S0 <= self.m:
            raise DomainError(f"count_S0 must lie in [0, m], got {self.count_S0}")


@dataclass(frozen=True)
class CountDistribution:
    probabilities: tuple[float, ...]  # index c -> Pr(N = c)
    provenance: str  # "exact-enumeration" or "monte-carlo"
    samples: Optional[int] = None
    position_marginals: tuple[float, ...] = ()

    @property
    def m(self) -> int:
        return len(self.probabilities) - 1

    @property
    def mean(self) -> float:
        return sum(c * p for c, p in enumerate(self.probabilities))

    def at_least(self, threshold: float) -> float:
        """Pr(N >= threshold)."""
        return sum(p for c, p in enumerate(self.probabilities) if c >= threshold)

    def below(self, threshold: float) -> float:
        """Pr(N < threshold)."""
        return sum(p for c, p in enumerate(self.probabilities) if c < threshold)

    def above(self, threshold: float) -> float:
        """Pr(N > threshold)."""
        return sum(p for c, p in enumerate(self.probabilities) if c > threshold)


# -- per-pair / per-individual probabilities ---------------------------------

def pair_success_probability(
    schema: SchemaPredicate,
    parents: tuple[Individual, Individual],
    strategy: StrategyProfile,
    problem,
    population: Optional[Population] = None,
    t: Optional[int] = None,
) -> float:
    """Pr(S | (x_i, x_j)): total weight of the recombination operators mapping the pair into S."""
    first, second = parents
    if population is None:
        population = Population((first, second))
    if t is None:
        t = population.generation
    dist = check_distribution(strategy.recombination_rule(population, t, first, second))
    total = 0.0
    for w, pw in dist.items():
        if pw == 0:
            continue
        for op, p_op in strategy.recombination_families[w].items():
            if schema(make_individual(problem, op(first.genome, second.genome))):
                total += pw * p_op
    return total


def average_success_probability(schema: SchemaPredicate, population: Population, mode: PairSampling,
                                strategy: StrategyProfile, problem) -> float:
    """Mean of Pr(S | (x_i, x_j)) over the ordered pairs the sampling mode allows."""
    pairs = ordered_pairs(len(population), PairSampling(mode))
    total = sum(pair_success_probability(schema, (population[i], population[j]), strategy, problem, population)
                for i, j in pairs)
    return total / len(pairs)


def mutation_success_probability(
    schema: SchemaPredicate,
    individual: Individual,
    strategy: StrategyProfile,
    problem,
    population: Optional[Population] = None,
    t: Optional[int] = None,
) -> float:
    """Pr(S | x): total weight of the mutation operators mapping ``individual`` into S."""
    if population is None:
        population = Population((individual,))
    if t is None:
        t = population.generation
    dist = check_distribution(strategy.mutation_rule(population, t, individual))
    total = 0.0
    for w, pw in dist.items():
        if pw == 0:
            continue
        for op, p_op in strategy.mutation_families[w].items():
            if schema(make_individual(problem, op(individual.genome))):
                total += pw * p_op
    return total


# -- closed-form bounds --------------------------------------------------------

def chernoff_count_bounds(P: float, m: int, delta: float) -> tuple[float, float]:
    """Bounds on Pr(N < (1-delta) m P) and Pr(N > (1+delta) m P) for N ~ Bin(m, P)."""
    _unit("P", P)
    _unit("delta", delta)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    lower = math.exp(-delta**2 * m * P / 2)
    upper = math.exp(-delta**2 * m * P / 3)
    return _clamp(lower), _clamp(upper)


def small_count_lower_bound(count_S0: int, m: int, alpha: float, beta: float = 1.0) -> float:
    """Pr(N(S, .) >= 1) >= (1 - (1 - count_S0/m)^m) * alpha * beta.

    ``beta = 1`` is the bound after recombination; a mutation preservation
    floor ``beta`` gives the bound after mutation.
    """
    _unit("alpha", alpha)
    _unit("beta", beta)
    if m < 1 or not 0 <= count_S0 <= m:
        raise DomainError(f"need 0 <= count_S0 <= m and m >= 1, got count_S0={count_S0}, m={m}")
    if count_S0 == 0:
        return 0.0
    return _clamp((1.0 - (1.0 - count_S0 / m) ** m) * alpha * beta)


def mu_lower_bound(inp: SchemaBoundInput) -> float:
    """m (Pr(S|S) (1-eps) P + Pr(S|not S) (1 - P(1+eps))), create term floored at 0."""
    create_share = max(0.0, 1.0 - inp.P * (1.0 + inp.eps))
    value = inp.m * (inp.pr_preserve * (1.0 - inp.eps) * inp.P + inp.pr_create * create_share)
    return max(0.0, value)


def _two_sided_factor(inp: SchemaBoundInput) -> float:
    mp = inp.m * inp.P
    return 1.0 - math.exp(-inp.eps**2 * mp / 2) - math.exp(-inp.eps**2 * mp / 3)


def after_mutation_tail_bound(inp: SchemaBoundInput) -> float:
    """Lower bound on Pr(N(S, x_mut) >= (1 - delta) mu_lower_bound)."""
    mu = mu_lower_bound(inp)
    if mu == 0.0:
        return 0.0
    second = _two_sided_factor(inp)
    if second <= 0.0:
        return 0.0
    return _clamp((1.0 - math.exp(-inp.delta**2 * mu / 2)) * second)


def schema_theorem_bound(inp: SchemaBoundInput, selection_conditional: float, n_threshold: int = 1,
                         form: str = "tail") -> float:
    """Lower bound on Pr(N(S, z) >= n_threshold) after the full cycle.

    ``selection_conditional`` is Pr(N(S, z) >= n | the post-mutation event),
    which depends on the selection rule and is supplied by the caller.
    ``form="tail"`` multiplies it by :func:`after_mutation_tail_bound`;
    ``form="small-count"`` by :func:`small_count_lower_bound` with alpha, beta
    and count_S0 from ``inp`` (then ``n_threshold`` must be 1).
    """
    _unit("selection_conditional", selection_conditional)
    if not 1 <= n_threshold <= inp.m:
        raise DomainError(f"n_threshold must lie in 1..m, got {n_threshold}")
    if form == "tail":
        return _clamp(selection_conditional * after_mutation_tail_bound(inp))
    if form == "small-count":
        if n_threshold != 1:
            raise DomainError("the small-count form bounds Pr(N >= 1) only")
        return _clamp(selection_conditional * small_count_lower_bound(inp.count_S0, inp.m, inp.alpha, inp.beta))
    raise DomainError(f"unknown form {form!r}")


def expected_count_lower_bound(inp: SchemaBoundInput, k: float, selection_conditional: float) -> float:
    """Markov-type lower bound on E N(S, z), evaluated at a caller-chosen k.

    ``selection_conditional`` is Pr(N(S, z) >= ceil(k (1-delta) mu) | post-mutation event).
    """
    mu = mu_lower_bound(inp)
    level = (1.0 - inp.delta) * mu
    if level <= 0:
        return 0.0
    if not 0.0 <= k <= inp.m / level:
        raise DomainError(f"k must lie in [0, m / ((1-delta) mu)] = [0, {inp.m / level}]")
    _unit("selection_conditional", selection_conditional)
    return math.ceil(k * level) * after_mutation_tail_bound(inp) * selection_conditional


# -- oracles ------------------------------------------------------------------

def _convolve(marginals: Sequence[float]) -> list[float]:
    dist = [1.0]
    for p in marginals:
        nxt = [0.0] * (len(dist) + 1)
        for c, q in enumerate(dist):
            nxt[c] += q * (1.0 - p)
            nxt[c + 1] += q * p
        dist = nxt
    return dist


def _family_items(families, dist):
    for w, pw in dist.items():
        if pw == 0:
            continue
        for op, p_op in families[w].items():
            yield pw * p_op, op


def exact_count_distribution(
    schema: SchemaPredicate,
    population: Population,
    strategy: StrategyProfile,
    problem,
    stage: str = "recombination",
    max_atoms: int = MAX_ATOMS,
) -> CountDistribution:
    """Exact law of N(S, x_rec) or N(S, x_mut) by enumeration.

    For every offspring position the atoms (parent pair, family, operator
    and, for ``stage="mutation"``, mutation family and operator) are
    enumerated in canonical order, position-major then operator-minor. Their
    weights give that position's success probability; positions are drawn
    independently, so the count law is the exact convolution of the
    per-position Bernoulli laws.
    """
    if stage not in ("recombination", "mutation"):
        raise DomainError(f"unknown stage {stage!r}")
    m = len(population)
    t = population.generation
    pairs = ordered_pairs(m, strategy.pair_sampling)
    pair_weight = 1.0 / len(pairs)
    mutation_cache: dict = {}
    atoms = 0
    marginals = []
    for _position in range(m):
        success = 0.0
        for i, j in pairs:
            first, second = population[i], population[j]
            rule = strategy.recombination_rule(population, t, first, second)
            for w_rec, op in _family_items(strategy.recombination_families, rule):
                child = make_individual(problem, op(first.genome, second.genome))
                if stage == "recombination":
                    atoms += 1
                    if schema(child):
                        success += pair_weight * w_rec
                    continue
                key = child.genome
                if key not in mutation_cache:
                    mrule = strategy.mutation_rule(population, t, child)
                    count = 0
                    mass = 0.0
                    for w_mut, mop in _family_items(strategy.mutation_families, mrule):
                        count += 1
                        if schema(make_individual(problem, mop(child.genome))):
                            mass += w_mut
                    mutation_cache[key] = (mass, count)
                mass, count = mutation_cache[key]
                atoms += count
                success += pair_weight * w_rec * mass
            if atoms > max_atoms:
                raise OracleOverflowError(f"more than {max_atoms} atoms to enumerate")
        marginals.append(success)
    return CountDistribution(tuple(_convolve(marginals)), "exact-enumeration", None, tuple(marginals))


def monte_carlo_count_distribution(
    schema: SchemaPredicate,
    population: Population,
    strategy: StrategyProfile,
    problem,
    stage: str = "recombination",
    samples: int = 10_000,
    rng: Optional[random.Random] = None,
) -> CountDistribution:
    """Empirical law of N(S, .) from repeated runs of the engine's stages."""
    rng = rng or random.Random()
    m = len(population)
    counts = [0] * (m + 1)
    hits = [0] * m
    for _ in range(samples):
        offspring = recombination_stage(population, strategy, problem, rng)
        if stage == "mutation":
            offspring = mutation_stage(population, offspring, strategy, problem, rng)
        flags = [schema(x) for x in offspring]
        counts[sum(flags)] += 1
        for k, f in enumerate(flags):
            hits[k] += f
    return CountDistribution(tuple(c / samples for c in counts), "monte-carlo", samples,
                             tuple(h / samples for h in hits))
