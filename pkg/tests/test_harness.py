import json
from dataclasses import replace
from fractions import Fraction

import pytest

from hybrid_ea.errors import ConfigError
from hybrid_ea.harness import (
    ExperimentConfig,
    ExperimentReport,
    GeneratorParams,
    config_from_mapping,
    generate_instance,
    load_config,
    run_experiment,
    run_seed,
    theory_for,
    verify_report,
    write_instances,
)
from hybrid_ea.scheduling import SchedulingInstance

GEN = GeneratorParams(n=6, long_jobs=1)


def test_generator_is_seeded_and_in_range():
    a = generate_instance(GEN, 3)
    assert a == generate_instance(GEN, 3)
    assert a != generate_instance(GEN, 4)
    for r, p, q in a.triples():
        assert 0 <= r <= 60 and 0 <= q <= 60
        assert 1 <= p <= 10 or 30 <= p <= 60


def test_generator_validation():
    with pytest.raises(ConfigError):
        GeneratorParams(n=0)
    with pytest.raises(ConfigError):
        GeneratorParams(n=3, release=(5, 1))


def test_write_instances_round_trip(tmp_path):
    paths = write_instances(GEN, [1, 2], tmp_path)
    assert [p.name for p in paths] == ["instance_n6_s1.txt", "instance_n6_s2.txt"]
    assert SchedulingInstance.load(paths[0]) == generate_instance(GEN, 1)


def test_config_mapping_and_errors(tmp_path):
    cfg = config_from_mapping({"eps": "1/2", "seeds": "1..3", "instance": {"generator": {"n": 5, "release": [0, 9]}}})
    assert cfg.eps == Fraction(1, 2)
    assert cfg.seeds == (1, 2, 3)
    assert cfg.generator.release == (0, 9)
    assert config_from_mapping({"seeds": "4", "instance": {"generator": {"n": 5}}}).seeds == (4,)
    with pytest.raises(ConfigError):
        config_from_mapping({"seeds": "x..y", "instance": {"generator": {"n": 5}}})
    with pytest.raises(ConfigError):
        config_from_mapping({"instance": {"generator": {"n": 5}}, "colour": 1})
    with pytest.raises(ConfigError):
        config_from_mapping({"seeds": [1]})
    with pytest.raises(ConfigError):
        ExperimentConfig(generator=GEN, eps=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(generator=GEN, budget=-3)
    (tmp_path / "inst.txt").write_text(generate_instance(GEN, 1).to_text())
    (tmp_path / "cfg.yaml").write_text("instance: {file: inst.txt}\nseeds: [1, 2]\nm: 3\n")
    loaded = load_config(tmp_path / "cfg.yaml")
    assert loaded.instance_file == str(tmp_path / "inst.txt")
    assert loaded.m == 3


def test_theory_budget():
    cfg = ExperimentConfig(generator=GEN, m=4, eps=1)
    th = theory_for(6, cfg)
    assert th.drift_sum == pytest.approx(256 / 175 * 21)
    assert th.walk_term == pytest.approx(6.0**3)
    assert th.budget == int(10 * (th.drift_sum + th.walk_term))
    assert theory_for(6, replace(cfg, budget=7)).budget == 7


def test_budget_zero_run():
    cfg = ExperimentConfig(generator=GEN, budget=0, seeds=(1,))
    row, trace = run_seed(cfg, 1)
    assert row.generations == 0
    assert len(trace.records) == 1


def test_report_files_are_deterministic(tmp_path):
    cfg = ExperimentConfig(generator=GEN, eps=Fraction(1, 2), seeds=(1, 2, 3), verify=True)
    first = run_experiment(replace(cfg, out_dir=str(tmp_path / "a")))
    second = run_experiment(replace(cfg, out_dir=str(tmp_path / "b"), workers=2))
    body = lambda d: (tmp_path / d / "runs.csv").read_text().split("\n", 1)
    head_a, rows_a = body("a")
    assert head_a.startswith("# generated: ")
    assert rows_a == body("b")[1]
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["aggregate"] == second.summary()["aggregate"]
    assert summary["config"]["eps"] == "0.5"
    assert first.failures == []


def test_verify_flags_failures():
    cfg = ExperimentConfig(generator=GEN, seeds=(1,), verify=True)
    row, _ = run_seed(cfg, 1)
    bad = replace(row, satisfactory_hit=None, monotone=False, aux_hit=10**6)
    failures = verify_report(ExperimentReport(cfg, [bad]))
    assert any("success rate" in f for f in failures)
    assert any("not monotone" in f for f in failures)
    assert any("drift bound" in f for f in failures)
    assert verify_report(ExperimentReport(cfg, [row])) == []
