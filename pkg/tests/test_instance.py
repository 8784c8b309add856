import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hybrid_ea.errors import DomainError
from hybrid_ea.scheduling import SchedulingInstance, evaluate_schedule, lateness
from hybrid_ea.scheduling.instance import exact, format_number

from conftest import instances


def brute_lateness(triples, order):
    # event-by-event simulation kept separate from the library loop
    t, worst = 0, 0
    for j in order:
        r, p, q = triples[j]
        if t < r:
            t = r
        t += p
        worst = max(worst, t + q)
    return worst


def test_two_job_orders(two_jobs):
    assert evaluate_schedule(two_jobs, (0, 1)).lateness == 7
    assert evaluate_schedule(two_jobs, (1, 0)).lateness == 11
    assert evaluate_schedule(two_jobs, (1, 0)).starts == (1, 4)


def test_machine_waits_for_release():
    inst = SchedulingInstance.from_triples([(5, 1, 0)])
    sched = evaluate_schedule(inst, (0,))
    assert sched.starts == (5,)
    assert sched.lateness == 6


def test_rejects_bad_permutation(two_jobs):
    with pytest.raises(DomainError):
        evaluate_schedule(two_jobs, (0, 0))
    with pytest.raises(DomainError):
        evaluate_schedule(two_jobs, (0,))


def test_rejects_negative_time():
    with pytest.raises(DomainError):
        SchedulingInstance.from_triples([(0, -1, 0)])


@given(instances(max_n=5), st.randoms(use_true_random=False))
def test_lateness_matches_simulation(inst, rnd):
    perm = list(range(inst.n))
    rnd.shuffle(perm)
    expected = brute_lateness(inst.triples(), perm)
    assert lateness(inst, perm) == expected
    assert evaluate_schedule(inst, perm).lateness == expected


@given(instances())
def test_text_round_trip(inst):
    assert SchedulingInstance.from_text(inst.to_text()) == inst


def test_fractional_times_round_trip(tmp_path):
    inst = SchedulingInstance.from_triples([(0.5, Fraction(1, 3), 2), ("1.25", 1, 0)])
    path = tmp_path / "inst.txt"
    inst.save(path)
    assert SchedulingInstance.load(path) == inst
    assert "1/3" in path.read_text()
    # job 0 runs [1/2, 5/6] and delivers at 17/6; job 1 runs [5/4, 9/4]
    assert lateness(inst, (0, 1)) == Fraction(17, 6)


def test_text_comments_and_errors():
    text = "# demo\n2\n0 2 5\n# second job\n1 3 1\n"
    assert SchedulingInstance.from_text(text).n == 2
    for bad in ("", "2\n0 1 1\n", "x\n", "1\n0 1\n", "1\n0 a 1\n"):
        with pytest.raises(DomainError):
            SchedulingInstance.from_text(bad)


@pytest.mark.parametrize("value, text", [(3, "3"), (Fraction(1, 4), "0.25"), (Fraction(-3, 8), "-0.375"),
                                         (Fraction(1, 3), "1/3"), (0.1, "0.1")])
def test_format_number(value, text):
    assert format_number(exact(value)) == text
    assert exact(text) == exact(value)


def test_exact_keeps_ints():
    assert isinstance(exact(4.0), int)
    with pytest.raises(DomainError):
        exact(True)


def test_optimal_order_is_among_permutations(two_jobs):
    values = {lateness(two_jobs, p) for p in itertools.permutations(range(2))}
    assert values == {7, 11}
