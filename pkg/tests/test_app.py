"""Tests for the artifact writers and the command-line entry point."""

import json

import numpy as np
import pandas as pd
import pytest

import app
from app import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from simulation.experiment import MseTrace
from utils.chart_helpers import floors_vs_size, floors_vs_step_size, learning_curves, transient_comparison
from utils.errors import ExportError
from utils.export import MANIFEST_NAME, emit_csv, traces_to_frame, write_gnuplot_script, write_manifest

SMALL_RUN = (
    "simulation:\n"
    "  sample_count: 100\n"
    "  monte_carlo_runs: 1\n"
    "  moment_samples: 1000\n"
    "  algorithms: [lms, diffusion_klms]\n"
)


@pytest.fixture
def small_config_file(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(SMALL_RUN)
    return path


def _simulate(config_path, output_dir, *extra):
    return main(["simulate", "--preset", "fig1", "--config", str(config_path),
                 "--output-dir", str(output_dir), "--no-progress", *extra])


class TestExport:

    def test_trace_csv(self, tmp_path):
        trace = MseTrace("klms", np.array([1.0, 0.5, 0.25]), (1,), "abc")
        paths = emit_csv({"traces": traces_to_frame([trace])}, tmp_path)
        lines = paths[0].read_text().splitlines()
        assert len(lines) == 4
        assert lines[0] == "iteration,algorithm,mse"
        assert lines[1] == "0,klms,1.0"

    def test_empty_traces(self):
        assert list(traces_to_frame([]).columns) == ["iteration", "algorithm", "mse"]

    def test_manifest(self, tmp_path):
        path = write_manifest(tmp_path, "deadbeef", 3, [11, 12], [tmp_path / "traces.csv"], "simulate", "fig1")
        manifest = json.loads(path.read_text())
        assert manifest["config_hash"] == "deadbeef"
        assert manifest["master_seed"] == 3
        assert manifest["run_seeds"] == [11, 12]
        assert manifest["artifacts"] == ["traces.csv"]
        assert manifest["preset"] == "fig1"
        assert not any("time" in key for key in manifest)

    def test_gnuplot_script(self, tmp_path):
        path = write_gnuplot_script(tmp_path, "traces", tmp_path / "traces.csv", ["lms", "klms"])
        script = path.read_text()
        assert path.name == "traces.gp"
        assert "ALGORITHMS = 'lms klms'" in script
        assert "traces.csv" in script

    def test_unknown_gnuplot_kind(self, tmp_path):
        with pytest.raises(ExportError):
            write_gnuplot_script(tmp_path, "histogram", tmp_path / "x.csv")

    def test_output_dir_is_a_file(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        with pytest.raises(ExportError):
            emit_csv({"traces": traces_to_frame([])}, blocker)


class TestCli:

    def test_validate_preset(self, capsys):
        assert main(["validate-config", "--preset", "fig1"]) == EXIT_OK
        assert "config OK" in capsys.readouterr().out

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("filter:\n  mu: -0.1\n")
        assert main(["validate-config", "--config", str(path)]) == EXIT_CONFIG

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("filter:\n  momentum: 0.9\n")
        assert main(["simulate", "--config", str(path), "--output-dir", str(tmp_path)]) == EXIT_CONFIG

    def test_missing_config_file(self, tmp_path):
        assert main(["validate-config", "--config", str(tmp_path / "nope.yaml")]) == EXIT_CONFIG

    def test_simulate_writes_artifacts(self, small_config_file, tmp_path):
        out = tmp_path / "out"
        assert _simulate(small_config_file, out, "--gnuplot", "--html") == EXIT_OK
        lines = (out / "traces.csv").read_text().splitlines()
        assert len(lines) == 1 + 2 * 100
        assert (out / "traces.gp").exists()
        assert (out / "traces.html").exists()
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert manifest["command"] == "simulate"
        assert manifest["artifacts"] == ["traces.csv", "traces.gp", "traces.html"]
        assert len(manifest["run_seeds"]) == 1

    def test_simulate_is_byte_stable(self, small_config_file, tmp_path):
        assert _simulate(small_config_file, tmp_path / "a") == EXIT_OK
        assert _simulate(small_config_file, tmp_path / "b") == EXIT_OK
        for name in ("traces.csv", MANIFEST_NAME):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_seed_flag_changes_output(self, small_config_file, tmp_path):
        assert _simulate(small_config_file, tmp_path / "a") == EXIT_OK
        assert _simulate(small_config_file, tmp_path / "b", "--seed", "5") == EXIT_OK
        a = (tmp_path / "a" / "traces.csv").read_bytes()
        b = (tmp_path / "b" / "traces.csv").read_bytes()
        assert a != b

    def test_sweep_step_size(self, tmp_path):
        path = tmp_path / "sweep.yaml"
        path.write_text(SMALL_RUN + "sweep:\n  mu_values: [0.05, 0.1, 0.2]\n")
        out = tmp_path / "out"
        assert main(["sweep-step-size", "--config", str(path), "--preset", "fig3",
                     "--output-dir", str(out), "--no-progress"]) == EXIT_OK
        lines = (out / "sweep_step_size.csv").read_text().splitlines()
        assert lines[0] == "mu,predicted_floor_eq21,predicted_floor_fixedpoint,empirical_floor"
        assert len(lines) == 4

    def test_predict_transient(self, small_config_file, tmp_path):
        out = tmp_path / "out"
        assert main(["predict-transient", "--preset", "fig4", "--config", str(small_config_file),
                     "--output-dir", str(out), "--no-progress", "--gnuplot"]) == EXIT_OK
        lines = (out / "transient.csv").read_text().splitlines()
        assert lines[0] == "n,predicted_mse,empirical_mse"
        assert len(lines) == 1 + 100
        assert (out / "transient.gp").exists()

    def test_unwritable_output_dir(self, small_config_file, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        assert _simulate(small_config_file, blocker) == EXIT_RUNTIME

    def test_unexpected_error_exits_with_runtime_code(self, small_config_file, tmp_path, monkeypatch):
        def broken(config, args, output_dir):
            raise KeyError("missing column")

        monkeypatch.setitem(app.COMMANDS, "simulate", broken)
        assert _simulate(small_config_file, tmp_path / "out") == EXIT_RUNTIME


class TestCharts:

    def test_learning_curves(self):
        traces = [MseTrace(tag, np.array([1.0, 0.5, 0.2]), (1,), "x") for tag in ("lms", "diffusion_klms")]
        fig = learning_curves(traces_to_frame(traces))
        assert len(fig.data) == 2
        assert fig.layout.yaxis.type == "log"

    def test_floors_vs_size(self):
        table = pd.DataFrame({
            "size": [1, 2, 1, 2], "snr_db": [10.0, 10.0, 20.0, 20.0],
            "mean_floor": [0.1, 0.05, 0.01, 0.005], "std_floor": [0.01] * 4,
            "theory_floor": [0.08, 0.04, 0.008, 0.004],
        })
        assert len(floors_vs_size(table).data) == 4

    def test_floors_vs_step_size(self):
        table = pd.DataFrame({"mu": [0.1, 0.2], "predicted_floor_eq21": [0.01, 0.02],
                              "predicted_floor_fixedpoint": [0.01, 0.02], "empirical_floor": [0.02, 0.03]})
        assert len(floors_vs_step_size(table).data) == 3

    def test_transient(self):
        table = pd.DataFrame({"n": [0, 1, 2], "predicted_mse": [1.8, 0.9, 0.5], "empirical_mse": [1.8, 1.0, 0.4]})
        assert len(transient_comparison(table, 1).data) == 2

    def test_empty_frame(self):
        fig = learning_curves(pd.DataFrame(columns=["iteration", "algorithm", "mse"]))
        assert len(fig.data) == 0
        assert len(fig.layout.annotations) == 1
