import csv
import io
import json

import pytest

from spotcheck.cli import ConfigError, RunConfig, main

RC_HEADER = "r_over_c,p_signal,prior_star,ros_workload,rss_workload,scaled_rss,feasible_ros,feasible_rss"
N_HEADER = "n,ros_workload,rss_workload,rsus_workload,scaled_rss,scaled_rsus"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestOptimal:
    def test_rss(self, capsys):
        code, doc = run_json(capsys, "optimal", "--family", "rss")
        res = doc["result"]
        assert code == 0 and res["feasible"]
        assert res["policy"]["x_a"][1] == pytest.approx(0.1015625, abs=1e-12)
        assert res["policy"]["x_b"][0] == pytest.approx(0.2890625, abs=1e-12)
        assert res["workload"] == pytest.approx(0.1797, abs=1e-4)

    def test_ros(self, capsys):
        code, doc = run_json(capsys, "optimal", "--family", "ros")
        assert doc["result"]["workload"] == pytest.approx(0.5, abs=1e-12)

    def test_ros_infeasible_exit_zero(self, capsys):
        code, doc = run_json(capsys, "optimal", "--family", "ros", "--reward", "5")
        assert code == 0
        assert doc["result"]["feasible"] is False
        assert doc["result"]["margin"] == pytest.approx(-0.12, abs=1e-12)

    def test_rsus_vector(self, capsys):
        _, doc = run_json(capsys, "optimal", "--family", "rsus")
        assert doc["result"]["policy"]["x"] == pytest.approx([0.440879, 0.388327, 0.2890625, 0.1015625], abs=1e-6)

    def test_swapped_labels_reported_in_caller_naming(self, capsys):
        _, doc = run_json(capsys, "optimal", "--prior", "0.2", "--n", "2")
        res = doc["result"]
        assert res["label_swapped"] is True
        # the rarer raw label 'a' now gets the larger probability
        assert res["policy"]["x_a"] == pytest.approx([0.0, 0.2890625, 0.2890625], abs=1e-12)
        assert res["policy"]["x_b"] == pytest.approx([0.1015625, 0.1015625, 0.0], abs=1e-12)

    def test_hetero(self, capsys, tmp_path):
        cfg = {"hetero_model": {"prior_a": 0.8, "student_noise": [[0.9, 0.9], [0.9, 0.9]],
                                "ta_noise": [1.0, 1.0], "costs": [1.0, 1.0]},
               "family": "hetero", "econ": {"cost": 1.0, "reward": 25.0}}
        path = tmp_path / "h.json"
        path.write_text(json.dumps(cfg))
        _, doc = run_json(capsys, "optimal", "--config", str(path))
        assert doc["result"]["policy"]["pairs"][0][1] == pytest.approx(0.25, abs=1e-12)


class TestVerify:
    def test_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--family", "rss")
        assert code == 0 and out.startswith("DSIC: PASS")

    def test_custom_fail(self, capsys):
        code, doc = run_json(capsys, "verify", "--family", "custom", "--x-a", "0.1015625", "--x-b", "0.28")
        assert code == 1
        assert doc["result"]["worst"]["strategy"].startswith("LAZY")
        assert doc["result"]["worst"]["utility_gap"] > 0

    def test_rsus_iccp(self, capsys):
        code, _, _ = run(capsys, "verify", "--family", "rsus", "--concept", "iccp")
        assert code == 0

    def test_cap_exceeded(self, capsys):
        code, _, err = run(capsys, "verify", "--n", "7")
        assert code == 2 and "capped" in err

    def test_no_color(self, capsys, monkeypatch):
        monkeypatch.setenv("NO_COLOR", "1")
        _, out, _ = run(capsys, "verify")
        assert "\033[" not in out


class TestSweeps:
    def test_rc_header_golden(self, capsys):
        code, out, _ = run(capsys, "sweep-rc", "--r-over-c", "25", "--p-signal", "0.9", "--prior-step", "0.01")
        assert code == 0
        assert out.splitlines()[0] == RC_HEADER

    def test_n_header_golden(self, capsys):
        _, out, _ = run(capsys, "sweep-n", "--n-min", "1", "--n-max", "3")
        lines = out.splitlines()
        assert lines[0] == N_HEADER and len(lines) == 4

    def test_n_values_roundtrip(self, capsys):
        _, out, _ = run(capsys, "sweep-n", "--n-min", "10", "--n-max", "10")
        row = next(csv.DictReader(io.StringIO(out)))
        assert float(row["scaled_rss"]) == pytest.approx(0.4735, abs=1e-4)
        # shortest round-trip formatting
        assert repr(float(row["rss_workload"])) == row["rss_workload"]

    def test_infeasible_cells_empty(self, capsys):
        _, out, _ = run(capsys, "sweep-rc", "--r-over-c", "1.5", "--p-signal", "0.7", "--prior-step", "0.01")
        row = next(csv.DictReader(io.StringIO(out)))
        assert row["prior_star"] == "" and row["feasible_ros"] == "false"

    def test_infeasible_reason_in_json(self, capsys):
        _, doc = run_json(capsys, "sweep-rc", "--r-over-c", "1.5", "--p-signal", "0.7", "--prior-step", "0.01")
        assert doc["result"]["rows"][0]["reason"]

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "n.csv"
        code, out, _ = run(capsys, "sweep-n", "--n-max", "2", "--out", str(path))
        assert out == "" and path.read_text().splitlines()[0] == N_HEADER


class TestSimulate:
    def test_byte_identical(self, capsys):
        args = ("simulate", "--trials", "50000", "--seed", "42", "--format", "json")
        _, a, _ = run(capsys, *args)
        _, b, _ = run(capsys, *args)
        assert a == b

    def test_close_to_analytic(self, capsys):
        _, doc = run_json(capsys, "simulate", "--trials", "200000", "--seed", "42")
        res = doc["result"]
        assert abs(res["delta"]) <= 4 * res["workload_se"]

    def test_zero_trials(self, capsys):
        code, _, err = run(capsys, "simulate", "--trials", "0")
        assert code == 2 and "trials" in err

    def test_profile(self, capsys):
        _, doc = run_json(capsys, "simulate", "--trials", "1000", "--profile", "truthful,lazy_a,truthful")
        assert len(doc["result"]["students"]) == 3


class TestConfig:
    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            RunConfig.from_dict({"bogus": 1})

    def test_nested_sections(self):
        cfg = RunConfig.from_dict({"model": {"prior_a": 0.6}, "econ": {"reward": 10}})
        assert cfg.prior_a == 0.6 and cfg.reward == 10.0

    def test_json_roundtrip(self, capsys):
        _, doc = run_json(capsys, "compare", "--n", "4", "--reward", "30")
        cfg = RunConfig.from_dict(doc["config"])
        assert cfg.to_dict() == doc["config"]
        assert cfg.n == 4 and cfg.reward == 30.0

    def test_flags_override_file(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"n": 5, "reward": 40}))
        _, doc = run_json(capsys, "compare", "--config", str(path), "--n", "2")
        assert doc["config"]["n"] == 2 and doc["config"]["reward"] == 40.0

    def test_bad_probability(self, capsys):
        code, _, _ = run(capsys, "optimal", "--prior", "1.5")
        assert code == 2

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
