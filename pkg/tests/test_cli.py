import json

import pytest
from click.testing import CliRunner

from dacqo.cli import EXIT_CAPABILITY, EXIT_CONFIG, EXIT_NUMERICAL, main


@pytest.fixture
def runner():
    return CliRunner()


class TestSolve:
    def test_small_instance(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(main, [
            "solve", "--n", "4", "--steps", "2", "--trajectories", "4",
            "--output", str(out),
        ])
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text())
        assert report["n_qubits"] == 4
        assert 0.0 <= report["success_probability"] <= 1.0
        assert report["depth"] > 0

    def test_problem_file(self, runner, tmp_path):
        from dacqo.problem import random_spin_glass

        pf = tmp_path / "problem.json"
        pf.write_text(random_spin_glass(4, 1, "mixed").to_json())
        result = runner.invoke(main, [
            "solve", "--problem-file", str(pf), "--steps", "2",
            "--trajectories", "2",
        ])
        assert result.exit_code == 0, result.output

    def test_missing_config_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, [
            "solve", "--config", str(tmp_path / "nope.json"),
        ])
        assert result.exit_code == EXIT_CONFIG

    def test_bad_json_config_exits_2(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        result = runner.invoke(main, ["solve", "--config", str(cfg)])
        assert result.exit_code == EXIT_CONFIG

    def test_size_cap_exits_3(self, runner):
        result = runner.invoke(main, ["solve", "--n", "25", "--steps", "1"])
        assert result.exit_code == EXIT_CAPABILITY

    def test_unknown_flag_exits_2(self, runner):
        result = runner.invoke(main, ["solve", "--frobnicate", "1"])
        assert result.exit_code == 2

    def test_flag_overrides_config(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 25, "steps": 2, "trajectories": 2}))
        result = runner.invoke(main, [
            "solve", "--config", str(cfg), "--n", "4",
        ])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["n_qubits"] == 4


class TestFidelitySweep:
    def test_writes_csv_and_sidecar(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(main, [
            "fidelity-sweep", "--sizes", "4", "--c-grid", "0,0.05",
            "--steps", "2", "--trajectories", "4", "--output", str(out),
        ])
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[0] == (
            "N,fidelity,success_probability,digital_baseline,threshold_37pct"
        )
        assert len(lines) == 3
        meta = json.loads((tmp_path / "sweep.csv.meta.json").read_text())
        assert meta["command"] == "fidelity-sweep"
        assert "version" in meta

    def test_rows_sorted_and_digital_constant(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(main, [
            "fidelity-sweep", "--sizes", "4", "--c-grid", "0.08,0,0.03",
            "--steps", "2", "--trajectories", "4", "--output", str(out),
        ])
        assert result.exit_code == 0, result.output
        rows = [ln.split(",") for ln in out.read_text().splitlines()[1:]]
        fids = [float(r[1]) for r in rows]
        assert fids == sorted(fids)
        assert len({r[3] for r in rows}) == 1

    def test_rerun_byte_identical(self, runner, tmp_path):
        args = [
            "fidelity-sweep", "--sizes", "4", "--c-grid", "0,0.05",
            "--steps", "2", "--trajectories", "4", "--seed", "7",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert runner.invoke(main, args + ["--output", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["--output", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_size_not_multiple_of_block_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, [
            "fidelity-sweep", "--sizes", "6", "--k", "4",
            "--output", str(tmp_path / "x.csv"),
        ])
        assert result.exit_code == EXIT_CONFIG


class TestScaling:
    def test_writes_runtime_and_enhancement_tables(self, runner, tmp_path):
        out = tmp_path / "scaling.csv"
        result = runner.invoke(main, [
            "scaling", "--max-n", "24", "--n-step", "8",
            "--output", str(out),
        ])
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[0].startswith("N,runtime_digital")
        assert [ln.split(",")[0] for ln in lines[1:]] == ["8", "16", "24"]
        meta = json.loads((tmp_path / "scaling.csv.meta.json").read_text())
        assert meta["trotter_steps_assumption"] == 10
        enh = (tmp_path / "scaling_enhancement.csv").read_text().splitlines()
        assert enh[0] == "instance_class,block_size,enhancement_factor"
        # three instance classes, block sizes 2..6 each
        assert len(enh) == 1 + 3 * 5

    def test_includes_max_n_even_off_grid(self, runner, tmp_path):
        out = tmp_path / "scaling.csv"
        result = runner.invoke(main, [
            "scaling", "--max-n", "20", "--n-step", "8",
            "--output", str(out),
        ])
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[-1].split(",")[0] == "20"


class TestEmitCircuit:
    def test_round_trips_through_loader(self, runner, tmp_path):
        from dacqo.synthesis import Circuit

        out = tmp_path / "circuit.json"
        result = runner.invoke(main, [
            "emit-circuit", "--n", "4", "--steps", "1",
            "--output", str(out),
        ])
        assert result.exit_code == 0, result.output
        circuit = Circuit.from_json(out.read_text())
        assert circuit.width == 4
        assert circuit.depth_report().total > 0

    def test_digital_path(self, runner, tmp_path):
        from dacqo.synthesis import Circuit

        out = tmp_path / "circuit.json"
        result = runner.invoke(main, [
            "emit-circuit", "--n", "4", "--steps", "1", "--path", "digital",
            "--output", str(out),
        ])
        assert result.exit_code == 0, result.output
        circuit = Circuit.from_json(out.read_text())
        for g in circuit.gates():
            assert g.kind == "1q" or len(g.qubits) == 2

    def test_bad_path_choice_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, [
            "emit-circuit", "--n", "4", "--path", "telepathic",
        ])
        assert result.exit_code == 2


class TestFit:
    def _write_points(self, path, rows):
        path.write_text(
            "N,required_fidelity\n"
            + "\n".join(f"{n},{f}" for n, f in rows) + "\n"
        )

    def test_happy_path(self, runner, tmp_path):
        import numpy as np

        src = tmp_path / "points.csv"
        self._write_points(
            src,
            [(n, 1.0 - 0.2 * np.exp(-0.1 * n)) for n in (4, 8, 12, 16)],
        )
        result = runner.invoke(main, ["fit", "--input", str(src)])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["L"] == 1.0
        assert report["K"] == pytest.approx(0.8, abs=1e-5)
        assert 0.0 < report["prediction_n52"] <= 1.0

    def test_missing_input_exits_2(self, runner):
        assert runner.invoke(main, ["fit"]).exit_code == EXIT_CONFIG

    def test_degenerate_data_exits_4(self, runner, tmp_path):
        src = tmp_path / "points.csv"
        self._write_points(src, [(8, 0.9), (8, 0.92), (8, 0.95)])
        result = runner.invoke(main, ["fit", "--input", str(src)])
        assert result.exit_code == EXIT_NUMERICAL
