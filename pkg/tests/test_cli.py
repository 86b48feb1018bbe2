import numpy as np
import pytest

from zopt.cli import main
from zopt.harness import read_series_csv
from zopt.solvers import suggest_params, theorem_step_size

RUN_CONFIG = """\
[experiment]
scenario = unconstrained
num_runs = 2
run_seed_base = 300
x0_seed = 5

[problem]
m = 3
n = 8
noise_std = 0.1
problem_seed = 21

[solver]
mu = 1e-5
step_size = theorem
num_iters = 150
record_stride = 50

[outputs]
csv_path = cli_out.csv
"""


class TestSuggest:
    def test_matches_library_values(self, capsys):
        rc = main(
            [
                "suggest",
                "--mode",
                "unc",
                "--eps",
                "0.1",
                "--n",
                "50",
                "--lip",
                "4.0",
                "--pl",
                "1.5",
            ]
        )
        out = capsys.readouterr().out
        assert rc == 0
        mu, n_iters = suggest_params("unconstrained", 0.1, 50, 4.0, 1.5)
        assert f"mu: {mu:.6g}" in out
        assert f"num_iters: {n_iters}" in out
        assert f"step_size: {theorem_step_size('unconstrained', 50, 4.0):.6g}" in out

    def test_constrained_needs_diameter(self, capsys):
        rc = main(
            ["suggest", "--mode", "con", "--eps", "0.1", "--n", "5", "--lip", "2", "--pl", "1"]
        )
        assert rc == 2
        assert "d_x" in capsys.readouterr().err


class TestVerify:
    def test_reports_zero_violations(self, capsys, tmp_path):
        csv_path = tmp_path / "checks.csv"
        rc = main(
            ["verify", "--probes", "60", "--samples", "600", "--seed", "3", "--csv", str(csv_path)]
        )
        out = capsys.readouterr().out
        assert rc == 0
        assert "violations=0" in out
        assert "VIOLATED" not in out
        assert csv_path.read_text().startswith("check,trials,violations,margin")


class TestRun:
    def test_end_to_end(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(RUN_CONFIG)
        rc = main(["run", "--config", str(cfg), "--out-dir", str(tmp_path)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "unconstrained experiment" in out
        series = read_series_csv(tmp_path / "cli_out.csv")
        assert series.num_runs == 2

    def test_invalid_config_exits_2_with_location(self, tmp_path, capsys):
        cfg = tmp_path / "broken.cfg"
        cfg.write_text(RUN_CONFIG.replace("num_iters = 150", "num_iters = soon"))
        rc = main(["run", "--config", str(cfg)])
        err = capsys.readouterr().err
        assert rc == 2
        assert f"{cfg}:" in err
        assert "num_iters" in err

    def test_cost_gate_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "big.cfg"
        cfg.write_text(
            RUN_CONFIG.replace("num_iters = 150", "num_iters = 200000")
            .replace("n = 8", "n = 1000")
            .replace("num_runs = 2", "num_runs = 25")
            .replace("m = 3", "m = 100")
        )
        rc = main(["run", "--config", str(cfg)])
        assert rc == 2
        assert "--full" in capsys.readouterr().err

    def test_seed_env_override(self, tmp_path, capsys, monkeypatch):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(RUN_CONFIG)
        monkeypatch.setenv("ZOPT_SEED", "4242")
        rc = main(["run", "--config", str(cfg), "--out-dir", str(tmp_path)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "ZOPT_SEED=4242" in out
        series = read_series_csv(tmp_path / "cli_out.csv")
        assert series.metadata["problem_seed"] == "4242"
        assert series.metadata["x0_seed"] == "4243"
        assert series.metadata["run_seed_base"] == "4244"

    def test_bad_seed_env_rejected(self, tmp_path, capsys, monkeypatch):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(RUN_CONFIG)
        monkeypatch.setenv("ZOPT_SEED", "not-a-number")
        assert main(["run", "--config", str(cfg)]) == 2
