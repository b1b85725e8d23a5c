"""
Tests for the command-line runner and the experiment workflow.

Groups:
- CSV layout: header comment, columns, row counts
- determinism across runs and worker counts
- experiment results on small grids
- exit codes for argument, solver and invariant failures
"""

import csv
import json

import pytest

from src.cli import EXIT_ARGUMENT, EXIT_INVARIANT, EXIT_OK, EXIT_SOLVER, build_parser, main
from src.config import CONFIG_ENV, load_config
from src.experiments.dispatcher import build_spec, parse_grid
from src.experiments.output import format_value
from src.errors import ArgumentError, InvariantViolation
from src.models.enums import ExperimentId, WorkflowStatus
from src.workflows.graph import run_experiment

SMALL_FIG3A = ["--set", "experiments.n_max=1000", "--trials", "50", "-q"]


@pytest.fixture(autouse=True)
def no_config_env(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)


def read_output(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# ")
    metadata = json.loads(lines[0][2:])
    rows = list(csv.DictReader(lines[1:]))
    return metadata, rows


class TestOutput:
    def test_fig3a_layout(self, tmp_path):
        out = tmp_path / "fig3a.csv"
        assert main(["fig3a", "--out", str(out), *SMALL_FIG3A]) == EXIT_OK
        metadata, rows = read_output(out)
        assert metadata["experiment"] == "fig3a"
        assert metadata["trials"] == 50
        assert metadata["scenario"]["kappa_t"] == pytest.approx(0.0025)
        assert len(rows) == 1000
        assert list(rows[0]) == [
            "N", "rate_hwi", "rate_ideal", "rate_gap", "rate_limit", "mc_mean", "mc_std_error",
        ]
        with_mc = [int(row["N"]) for row in rows if row["mc_mean"]]
        assert with_mc == [1, 500, 1000]
        assert float(rows[-1]["rate_hwi"]) < 7.6511
        assert float(rows[-1]["rate_limit"]) == pytest.approx(7.6511, abs=1e-3)

    def test_run_subcommand_matches_shortcut(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["fig3b", "--out", str(a), "--set", "experiments.n_max=50", "-q"]) == EXIT_OK
        assert (
            main(["run", "--experiment", "fig3b", "--out", str(b), "--set", "experiments.n_max=50", "-q"])
            == EXIT_OK
        )
        assert a.read_bytes() == b.read_bytes()

    def test_help_lists_columns(self):
        text = build_parser().format_help()
        assert "fig4: N, compensated_closed_form" in text
        assert "custom-sweep: <axis>, rate_hwi" in text

    def test_format_value(self):
        assert format_value(None) == ""
        assert format_value(True) == "true"
        assert format_value(0.1) == "0.1"
        assert format_value(3) == "3"
        with pytest.raises(InvariantViolation):
            format_value(float("nan"))


class TestDeterminism:
    def test_repeated_runs_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["fig3a", "--out", str(a), "--seed", "9", *SMALL_FIG3A]) == EXIT_OK
        assert main(["fig3a", "--out", str(b), "--seed", "9", *SMALL_FIG3A]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_worker_count_does_not_matter(self, tmp_path):
        a, b = tmp_path / "one.csv", tmp_path / "two.csv"
        assert main(["fig3a", "--out", str(a), "--workers", "1", *SMALL_FIG3A]) == EXIT_OK
        assert main(["fig3a", "--out", str(b), "--workers", "2", *SMALL_FIG3A]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_monte_carlo(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["fig3a", "--out", str(a), "--seed", "1", *SMALL_FIG3A]) == EXIT_OK
        assert main(["fig3a", "--out", str(b), "--seed", "2", *SMALL_FIG3A]) == EXIT_OK
        assert a.read_bytes() != b.read_bytes()


class TestExperiments:
    def test_fig6b_crossover(self, tmp_path):
        out = tmp_path / "fig6b.csv"
        assert main(["fig6b", "--out", str(out), "-q"]) == EXIT_OK
        _, rows = read_output(out)
        assert len(rows) == 150
        for row in rows:
            p_dbm, kappa = float(row["P_dbm"]), float(row["kappa_t"])
            irs, relay = float(row["rate_irs"]), float(row["rate_df"])
            if p_dbm > 5:
                assert irs > relay
            if p_dbm < 2 and kappa < 0.005:
                assert relay > irs

    def test_fig6a_irs_ahead(self, tmp_path):
        out = tmp_path / "fig6a.csv"
        assert main(["fig6a", "--out", str(out), "--grid", "1:200:1", "-q"]) == EXIT_OK
        _, rows = read_output(out)
        assert len(rows) == 600
        assert all(float(row["rate_irs"]) > float(row["rate_df"]) for row in rows)
        assert {row["df_branch"] for row in rows} <= {"A", "B"}

    def test_custom_power_sweep(self, tmp_path):
        out = tmp_path / "custom.csv"
        args = ["custom-sweep", "--axis", "P_dbm", "--grid", "0:40:10", "--n", "64"]
        assert main([*args, "--out", str(out), "-q"]) == EXIT_OK
        metadata, rows = read_output(out)
        assert metadata["axis"] == "P_dbm"
        assert [float(row["P_dbm"]) for row in rows] == [0.0, 10.0, 20.0, 30.0, 40.0]
        rates = [float(row["rate_hwi"]) for row in rows]
        assert rates == sorted(rates)

    def test_custom_element_sweep(self, tmp_path):
        out = tmp_path / "custom.csv"
        assert main(["custom-sweep", "--grid", "1,10,100", "--out", str(out), "-q"]) == EXIT_OK
        _, rows = read_output(out)
        assert [row["N"] for row in rows] == ["1", "10", "100"]

    @pytest.mark.slow
    def test_fig4_small(self, tmp_path):
        out = tmp_path / "fig4.csv"
        assert main(["fig4", "--grid", "1,13", "--trials", "100", "--out", str(out), "-q"]) == EXIT_OK
        _, rows = read_output(out)
        assert [row["rank1_certified"] for row in rows] == ["true", "true"]
        for row in rows:
            assert float(row["optimized_mc_mean"]) > float(row["compensated_mc_mean"])

    @pytest.mark.slow
    def test_fig5_small(self, tmp_path):
        out = tmp_path / "fig5.csv"
        assert main(["fig5", "--grid", "13", "--trials", "100", "--out", str(out), "-q"]) == EXIT_OK
        _, rows = read_output(out)
        assert [row["variant"] for row in rows] == ["clean", "imperfect_csi", "residual_phase_noise"]

    def test_workflow_state(self, tmp_path):
        settings = load_config(overrides=["experiments.n_max=20"])
        spec = build_spec(ExperimentId.FIG3B, settings, tmp_path / "fig3b.csv")
        state = run_experiment(spec, settings)
        assert state["workflow_status"] == WorkflowStatus.COMPLETED.value
        assert [entry["message"] for entry in state["run_log"]][0] == "resolved"
        assert len(state["rows"]) == 20


class TestExitCodes:
    def test_unknown_config_key(self, tmp_path):
        out = tmp_path / "x.csv"
        assert main(["fig3b", "--set", "scenario.bogus=1", "--out", str(out), "-q"]) == EXIT_ARGUMENT
        assert not out.exists()

    def test_custom_sweep_needs_grid(self, tmp_path):
        assert main(["custom-sweep", "--out", str(tmp_path / "x.csv"), "-q"]) == EXIT_ARGUMENT

    def test_decreasing_grid(self, tmp_path):
        assert main(["fig6a", "--grid", "5,3", "--out", str(tmp_path / "x.csv"), "-q"]) == EXIT_ARGUMENT

    def test_axis_only_for_custom_sweep(self, tmp_path):
        args = ["fig6a", "--axis", "N", "--out", str(tmp_path / "x.csv"), "-q"]
        assert main(args) == EXIT_ARGUMENT

    def test_fractional_elements(self, tmp_path):
        assert main(["fig6a", "--grid", "1.5,2", "--out", str(tmp_path / "x.csv"), "-q"]) == EXIT_ARGUMENT

    def test_solver_failure(self, tmp_path):
        out = tmp_path / "fig4.csv"
        args = ["fig4", "--grid", "2", "--trials", "5", "--set", "experiments.solver.max_iterations=1"]
        assert main([*args, "--out", str(out), "-q"]) == EXIT_SOLVER
        assert not out.exists()

    def test_uncertified_solution(self, tmp_path):
        out = tmp_path / "fig4.csv"
        args = [
            "fig4", "--grid", "3", "--trials", "5",
            "--set", "scenario.phase_error_support=3.141592653589793",
        ]
        assert main([*args, "--out", str(out), "-q"]) == EXIT_INVARIANT
        assert not out.exists()


class TestGrid:
    def test_range(self):
        assert parse_grid("1:3:1") == [1.0, 2.0, 3.0]

    def test_list(self):
        assert parse_grid("1, 13,25") == [1.0, 13.0, 25.0]

    @pytest.mark.parametrize("text", ["1:3:0", "a,b", "5:1:1", "1:2"])
    def test_invalid(self, text):
        with pytest.raises(ArgumentError):
            parse_grid(text)
