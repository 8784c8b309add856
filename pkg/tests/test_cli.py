import json

import pytest

from hybrid_ea.cli import main


def _json_tail(text):
    return json.loads(text[text.index("{"):])


def test_generate_and_exact(tmp_path, capsys):
    assert main(["generate", "--n", "5", "--seed", "1..2", "--out", str(tmp_path)]) == 0
    files = sorted(tmp_path.iterdir())
    assert len(files) == 2
    capsys.readouterr()
    assert main(["oracle", "exact", "--instance", str(files[0])]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["witness"]) == 5


def test_run_writes_report_and_verifies(tmp_path, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("instance:\n  generator: {n: 6, long_jobs: 1}\nseeds: 1..3\neps: 0.5\n")
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out"), "--verify"])
    assert code == 0
    text = capsys.readouterr().out
    assert text.startswith("seed,n,long_jobs")
    assert _json_tail(text)["aggregate"]["runs"] == 3
    assert (tmp_path / "out" / "summary.json").exists()


def test_run_verify_failure_exits_nonzero(tmp_path, capsys):
    cfg = tmp_path / "cfg.yaml"
    # no generations and a tight eps: random orders rarely land within 1.1 J*
    cfg.write_text("instance:\n  generator: {n: 8}\nseeds: 1..5\nbudget: 0\neps: 0.1\n")
    code = main(["run", "--config", str(cfg), "--verify"])
    out = _json_tail(capsys.readouterr().out)
    assert out["failures"]
    assert code == 1


def test_bounds_output(capsys):
    assert main(["bounds", "--n", "6", "--pop-size", "4", "--P", "0.5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["variable_drift_bound"] == pytest.approx(256 / 175 * 21)
    assert out["runtime"]["top_level_walk_bound"] == pytest.approx(216)
    assert "chernoff" in out


def test_hitting_oracle(tmp_path, capsys):
    chain = tmp_path / "c.txt"
    chain.write_text("0.5 0.5 0\n0 0.5 0.5\n0 0 1\ntarget: 2\n")
    assert main(["oracle", "hitting", "--chain", str(chain)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["expected_hitting_time"]["0"] == pytest.approx(4.0)


def test_counts_oracle(tmp_path, capsys):
    main(["generate", "--n", "4", "--seed", "3", "--out", str(tmp_path)])
    capsys.readouterr()
    inst = next(tmp_path.iterdir())
    assert main(["oracle", "counts", "--instance", str(inst), "--pop-size", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert sum(out["distribution"]) == pytest.approx(1.0)
    assert out["position_marginals"][0] == pytest.approx(out["average_success_probability"], abs=1e-12)


def test_errors_exit_2(tmp_path, capsys):
    assert main(["oracle", "exact", "--instance", str(tmp_path / "missing.txt")]) == 2
    assert "error" in capsys.readouterr().err
