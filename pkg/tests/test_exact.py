import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from hybrid_ea.errors import OracleOverflowError
from hybrid_ea.exact import optimum_lateness
from hybrid_ea.scheduling import SchedulingInstance, check_design_conditions, lateness

from conftest import instances, random_instance


def test_two_jobs(two_jobs):
    res = optimum_lateness(two_jobs)
    assert res.j_star == 7
    assert res.witness == (0, 1)


@given(instances(max_n=6))
@settings(max_examples=150)
def test_pruned_search_matches_enumeration(inst):
    pruned = optimum_lateness(inst)
    full = optimum_lateness(inst, prune=False)
    assert pruned.j_star == full.j_star
    assert lateness(inst, pruned.witness) == pruned.j_star
    assert full.nodes == len(list(itertools.permutations(range(inst.n))))


def test_limit():
    inst = random_instance(random.Random(0), 5)
    with pytest.raises(OracleOverflowError):
        optimum_lateness(inst, limit=4)


def test_design_report_small_instance():
    inst = SchedulingInstance.from_triples([(0, 10, 3), (2, 1, 9), (0, 2, 1), (4, 1, 7)])
    report = check_design_conditions(inst, Fraction(1, 2))
    assert report.long_jobs == (0,)
    assert report.phi_count == 4
    assert report.condition1 and report.condition2
    assert report.condition3 and report.condition4
    assert report.top_level_best <= Fraction(3, 2) * report.j_star
    assert not report.partial
    assert report.as_dict()["eps"] == 0.5


def test_design_report_is_partial_on_large_instances():
    inst = random_instance(random.Random(1), 9)
    report = check_design_conditions(inst, 1, j_star=1)
    assert report.partial and report.condition3 is None
