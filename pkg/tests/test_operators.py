import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hybrid_ea.errors import DomainError
from hybrid_ea.scheduling import (
    PrefixRecombinationFamily,
    SwapMutationFamily,
    aux_fitness_by_enumeration,
    SchedulingInstance,
    aux_fitness_max,
    long_jobs,
    mutate,
    recombine,
)

from conftest import random_instance


def test_recombine_example():
    assert recombine((0, 1, 2, 3), (3, 2, 1, 0), 2, (0, 1)) == (0, 1, 3, 2)
    assert recombine((0, 1, 2, 3), (3, 2, 1, 0), 2, (1, 0)) == (0, 1, 2, 3)


@given(st.permutations(range(5)), st.permutations(range(5)))
def test_recombine_extremes(pi, sigma):
    pi, sigma = tuple(pi), tuple(sigma)
    assert recombine(pi, sigma, 0, range(5)) == sigma
    assert recombine(pi, sigma, 5, ()) == pi


@given(st.permutations(range(6)), st.permutations(range(6)), st.integers(0, 6), st.randoms(use_true_random=False))
def test_recombine_is_permutation_with_kept_head(pi, sigma, level, rnd):
    zeta = list(range(6 - level))
    rnd.shuffle(zeta)
    child = recombine(pi, sigma, level, zeta)
    assert sorted(child) == list(range(6))
    assert child[:level] == tuple(pi[:level])


def test_recombine_rejects_bad_zeta():
    with pytest.raises(DomainError):
        recombine((0, 1, 2), (2, 1, 0), 1, (0, 0))
    with pytest.raises(DomainError):
        recombine((0, 1, 2), (2, 1, 0), 4, ())


def test_recombination_family_is_uniform_over_suffixes():
    fam = PrefixRecombinationFamily(5, 2)
    items = list(fam.items())
    assert len(items) == len(fam) == math.factorial(3)
    assert math.isclose(sum(w for _, w in items), 1.0)
    children = {op((0, 1, 2, 3, 4), (4, 3, 2, 1, 0)) for op, _ in items}
    assert children == {(0, 1) + s for s in itertools.permutations((2, 3, 4))}
    sampled = fam.sample(random.Random(0))((0, 1, 2, 3, 4), (4, 3, 2, 1, 0))
    assert sampled in children


def _instance_with_long(seed, n=6, k=1):
    # long jobs need p >= eps * P; make them dominate the short ones
    rng = random.Random(seed)
    inst = random_instance(rng, n, long_jobs=0)
    triples = inst.triples()
    for j in rng.sample(range(n), k):
        triples[j] = (triples[j][0], 60, triples[j][2])
    return SchedulingInstance.from_triples(triples)


def test_mutation_identity_on_short_pair():
    inst = _instance_with_long(1)
    part = long_jobs(inst, Fraction(1, 2))
    pi = tuple(range(inst.n))
    shorts = [h for h, j in enumerate(pi) if j not in part.long]
    assert mutate(inst, part, pi, shorts[0], shorts[1], 3) == pi


def test_mutation_above_level_is_plain_swap():
    inst = SchedulingInstance.from_triples([(0, 1, 3)] * 5 + [(0, 20, 0)])
    part = long_jobs(inst, Fraction(1, 2))
    assert part.long == frozenset({5})
    pi = tuple(range(6))
    out = mutate(inst, part, pi, 5, 3, 2)
    expected = list(pi)
    expected[3], expected[5] = expected[5], expected[3]
    assert out == tuple(expected)


def test_mutation_family_size():
    inst = _instance_with_long(3)
    fam = SwapMutationFamily(inst, long_jobs(inst, Fraction(1, 2)), 2)
    items = list(fam.items())
    assert len(items) == len(fam) == 36
    assert math.isclose(sum(w for _, w in items), 1.0)


@given(st.integers(0, 10**6), st.permutations(range(6)), st.integers(0, 6), st.integers(0, 5), st.integers(0, 5),
       st.sampled_from([1, 2]))
@settings(max_examples=300)
def test_mutation_keeps_level_and_long_positions(seed, pi, level, a, b, k):
    inst = _instance_with_long(seed, 6, k)
    eps = Fraction(1, 2) if k == 1 else Fraction(1, 3)
    part = long_jobs(inst, eps)
    assert len(part.long) == k
    pi = tuple(pi)
    out = mutate(inst, part, pi, a, b, level)
    assert sorted(out) == list(range(6))
    assert aux_fitness_max(inst, part, out) >= min(level, aux_fitness_max(inst, part, pi))
    if pi[a] in part.long or pi[b] in part.long:
        # after the swap the long jobs stay where the swap put them
        swapped = list(pi)
        swapped[a], swapped[b] = swapped[b], swapped[a]
        for h in range(min(a, b), 6):
            if swapped[h] in part.long and h < level:
                assert out[h] == swapped[h]


@given(st.integers(0, 10**6), st.permutations(range(5)), st.permutations(range(5)), st.integers(0, 5),
       st.randoms(use_true_random=False))
@settings(max_examples=300)
def test_recombination_invariance_against_phi_oracle(seed, pi, sigma, level, rnd):
    inst = _instance_with_long(seed, 5, 1)
    part = long_jobs(inst, Fraction(1, 2))
    zeta = list(range(5 - level))
    rnd.shuffle(zeta)
    child = recombine(tuple(pi), tuple(sigma), level, zeta)
    assert aux_fitness_by_enumeration(inst, part, child) >= min(aux_fitness_by_enumeration(inst, part, pi), level)
