import json
import os
import subprocess
import sys

import numpy as np
import pytest

from digiwave.catalog import catalog
from digiwave.cli import main
from digiwave.config import ConfigError, apply_overrides, parse_override, problem_from_config
from digiwave.experiments import PRESETS, run_experiment
from digiwave.graph import write_graph
from digiwave.wave import SchemeError, read_trace_csv


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestTopologyCheck:
    def test_sphere4(self, capsys):
        code, out, _ = run_cli(capsys, "topology", "check", "catalog", "sphere4_min", "--sphere", "4", "--euler")
        assert code == 0
        assert out.splitlines() == ["sphere(4): PASS", "euler: 2"]

    def test_klein_manifold_orientable(self, capsys):
        code, out, _ = run_cli(capsys, "topology", "check", "catalog", "klein16", "--manifold", "2", "--orientable")
        assert code == 0
        assert out.splitlines() == ["manifold(2): PASS", "orientable: false"]

    def test_projective_not_sphere(self, capsys):
        code, out, _ = run_cli(capsys, "topology", "check", "projective11", "--sphere", "2")
        assert code == 1
        assert out.strip() == "sphere(2): FAIL"

    def test_expected_values(self, capsys):
        code, out, _ = run_cli(capsys, "topology", "check", "torus16", "--euler", "0", "--orientable", "true")
        assert code == 0 and "euler: PASS" in out and "orientable: PASS" in out
        code, out, _ = run_cli(capsys, "topology", "check", "torus16", "--euler", "1")
        assert code == 1 and "euler: FAIL" in out

    def test_graph_file(self, capsys, tmp_path):
        path = tmp_path / "s.txt"
        write_graph(catalog("string_disk(5)").graph, path)
        code, out, _ = run_cli(capsys, "topology", "check", str(path), "--contractible")
        assert code == 0 and out.strip() == "contractible: PASS"

    def test_orientable_precondition_fails(self, capsys):
        code, out, _ = run_cli(capsys, "topology", "check", "string_disk(4)", "--orientable")
        assert code == 1 and out.startswith("orientable: FAIL")

    def test_unknown_target(self, capsys):
        code, _, err = run_cli(capsys, "topology", "check", "no_such_thing", "--euler")
        assert code == 2 and "unknown catalog entry" in err

    def test_size_cap(self, capsys, tmp_path):
        from test_topology import STUCK_EULER_ONE

        path = tmp_path / "stuck.txt"
        write_graph(STUCK_EULER_ONE, path)
        code, _, err = run_cli(capsys, "topology", "check", str(path), "--contractible", "--max-points", "4")
        assert code == 2 and "error" in err


class TestCatalogList:
    def test_lists_everything(self, capsys):
        code, out, _ = run_cli(capsys, "catalog", "list")
        assert code == 0
        lines = out.splitlines()
        assert any(l.startswith("klein16: manifold(2) points=16 edges=48 euler=0 orientable=false") for l in lines)
        assert any(l.startswith("sphere4_min: sphere(4) points=10") for l in lines)


def write_config(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


class TestSolve:
    def test_klein_columns(self, capsys, tmp_path):
        cfg = write_config(tmp_path, {"graph": "klein16", "coefficients": {"uniform": 0.1},
                                      "f0": {"7": 16}, "f1": {"9": 16}, "steps": 30})
        out = tmp_path / "t.csv"
        code, stdout, _ = run_cli(capsys, "solve", "--config", cfg, "--out", str(out))
        assert code == 0
        header = out.read_text().splitlines()[0].split(",")
        assert len(header) == 17
        assert stdout.startswith("steps=30 A=16.0 max_dev=")
        with open(out) as fh:
            assert read_trace_csv(fh).shape == (31, 16)

    def test_zero_steps(self, capsys, tmp_path):
        cfg = write_config(tmp_path, {"graph": "klein16", "coefficients": {"uniform": 0.1},
                                      "f0": {"7": 16}, "f1": {"9": 16}, "steps": 0})
        out = tmp_path / "t.csv"
        assert run_cli(capsys, "solve", "--config", cfg, "--out", str(out))[0] == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 2 and lines[1].startswith("0,")

    def test_bad_column_sum(self, capsys, tmp_path):
        cfg = write_config(tmp_path, {"graph": "two_point", "coefficients": [[0.8, 0.3], [0.3, 0.7]],
                                      "f0": [2, 0], "f1": [2, 0], "steps": 5})
        code, _, err = run_cli(capsys, "solve", "--config", cfg, "--out", str(tmp_path / "t.csv"))
        assert code == 2 and "column 0" in err and "1.1" in err

    def test_inline_graph_and_file_graph(self, capsys, tmp_path):
        write_graph(catalog("cycle(5)").graph, tmp_path / "c5.txt")
        cfg = write_config(tmp_path, {"graph": "c5.txt", "coefficients": {"uniform": 0.2},
                                      "f0": [1, 0, 0, 0, 0], "f1": [0, 1, 0, 0, 0], "steps": 10})
        assert run_cli(capsys, "solve", "--config", cfg, "--out", str(tmp_path / "a.csv"))[0] == 0
        cfg2 = write_config(tmp_path, {"graph": {"points": 5, "edges": [[i, (i + 1) % 5] for i in range(5)]},
                                       "coefficients": {"uniform": 0.2},
                                       "f0": [1, 0, 0, 0, 0], "f1": [0, 1, 0, 0, 0], "steps": 10}, "b.json")
        assert run_cli(capsys, "solve", "--config", cfg2, "--out", str(tmp_path / "b.csv"))[0] == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_gnuplot(self, capsys, tmp_path):
        cfg = write_config(tmp_path, {"graph": "two_point", "coefficients": {"dense": [[0.8, 0.3], [0.2, 0.7]]},
                                      "f0": {"0": 2}, "f1": {"0": 2}, "steps": 3})
        out = tmp_path / "t.dat"
        run_cli(capsys, "solve", "--config", cfg, "--out", str(out), "--gnuplot")
        assert out.read_text().splitlines()[:2] == ["# n p0 p1", "0 2.0 0.0"]

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "solve", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "x"))
        assert code == 2 and err.startswith("digiwave: error:")


class TestConfig:
    def test_missing_key(self):
        with pytest.raises(ConfigError, match="steps"):
            problem_from_config({"graph": "two_point", "coefficients": {"uniform": 0.1}})

    def test_sparsity_error_surfaces(self):
        with pytest.raises(SchemeError, match="sparsity"):
            problem_from_config({"graph": "string_disk(3)", "coefficients": {"sparse": [[0, 2, 0.5]]},
                                 "class": "hyperbolic", "steps": 1})

    def test_wrong_length(self):
        with pytest.raises(ConfigError, match="f0"):
            problem_from_config({"graph": "two_point", "coefficients": {"uniform": 0.1}, "f0": [1], "steps": 1})

    def test_parse_override(self):
        assert parse_override("steps=200") == ("steps", 200)
        assert parse_override("f0.4=5.5") == ("f0.4", 5.5)
        assert parse_override("graph=klein16") == ("graph", "klein16")
        with pytest.raises(ConfigError):
            parse_override("steps")
        with pytest.raises(ConfigError):
            parse_override("=3")

    def test_apply_overrides_copies(self):
        base = {"f0": {"4": 10.0}, "steps": 50}
        out = apply_overrides(base, [("f0.4", 5.0), ("steps", 7), ("boundary.0", 0.0)])
        assert out == {"f0": {"4": 5.0}, "steps": 7, "boundary": {"0": 0.0}}
        assert base == {"f0": {"4": 10.0}, "steps": 50}


class TestExperiments:
    def test_presets_are_wave_class(self):
        for preset in PRESETS.values():
            assert problem_from_config(preset.config).scheme.kind == "wave"

    def test_cli_exit_and_files(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "experiment", "exp_4_1", "--out", str(tmp_path))
        assert code == 0 and "status=PASS" in out
        names = sorted(os.listdir(tmp_path))
        assert names == ["exp_4_1_acf.csv", "exp_4_1_report.txt", "exp_4_1_trace.csv"]
        report = (tmp_path / "exp_4_1_report.txt").read_text()
        assert "A=2.0" in report and "period[p0]=" in report and "residual[p0]=" in report
        assert len((tmp_path / "exp_4_1_trace.csv").read_text().splitlines()) == 52

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_experiment("exp_4_3", out_dir=str(a))
        run_experiment("exp_4_3", out_dir=str(b))
        for name in os.listdir(a):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_env_out_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("DIGIWAVE_OUT", str(tmp_path / "env"))
        assert run_cli(capsys, "experiment", "exp_4_1")[0] == 0
        assert (tmp_path / "env" / "exp_4_1_trace.csv").exists()

    def test_override_steps(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "experiment", "exp_4_4", "--set", "steps=20", "--out", str(tmp_path))
        assert code == 0 and "steps=20" in out
        with open(tmp_path / "exp_4_4_trace.csv") as fh:
            assert read_trace_csv(fh).shape == (21, 11)

    def test_override_breaking_a_check(self, capsys, tmp_path):
        # f1 sums to 22 instead of 11: the sum check must fail and the exit code report it
        code, out, _ = run_cli(capsys, "experiment", "exp_4_4", "--set", "f1.0=11", "--out", str(tmp_path))
        assert code == 1 and "status=FAIL" in out

    def test_malformed_override(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "experiment", "exp_4_1", "--set", "steps", "--out", str(tmp_path))
        assert code == 2 and "key=value" in err

    def test_gnuplot_experiment(self, capsys, tmp_path):
        run_cli(capsys, "experiment", "exp_4_2", "--out", str(tmp_path), "--gnuplot")
        assert (tmp_path / "exp_4_2_trace.dat").read_text().startswith("# n p0 p1")

    def test_unknown_experiment_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["experiment", "exp_9_9"])
        assert exc.value.code == 2

    def test_string_preset_interior_moves(self):
        res = run_experiment("exp_4_2", write=False)
        v = res.trace.values
        assert np.all(v[:, 0] == 0.0) and np.all(v[:, 9] == 0.0)
        assert np.any(v[2:, 1:9] != 0.0)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "digiwave", "catalog", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "torus16" in proc.stdout
