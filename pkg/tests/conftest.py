import random

import pytest
from hypothesis import strategies as st

from hybrid_ea.harness import GeneratorParams, generate_instance
from hybrid_ea.scheduling import SchedulingInstance


def random_instance(rng: random.Random, n: int, long_jobs: int = 0) -> SchedulingInstance:
    triples = []
    for k in range(n):
        p = rng.randint(20, 40) if k < long_jobs else rng.randint(1, 8)
        triples.append((rng.randint(0, 30), p, rng.randint(0, 30)))
    rng.shuffle(triples)
    return SchedulingInstance.from_triples(triples)


def small_times(max_value=20):
    return st.integers(min_value=0, max_value=max_value)


@st.composite
def instances(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    triples = draw(st.lists(st.tuples(small_times(), st.integers(0, 15), small_times()), min_size=n, max_size=n))
    return SchedulingInstance.from_triples(triples)


@pytest.fixture
def two_jobs():
    return SchedulingInstance.from_triples([(0, 2, 5), (1, 3, 1)])


@pytest.fixture
def n8_with_long():
    return generate_instance(GeneratorParams(n=8, long_jobs=1), seed=3)
