"""End-to-end tests for run, verify, ke and selftest."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

import crflab.cli.commands.selftest as selftest_command
from crflab.cli.app import app

HOMOGENEOUS = ["--preset", "homogeneous", "--t-max=6", "--output-dir=out"]


@pytest.fixture
def finished_run(cli_runner: CliRunner, workdir: Path) -> Path:
    result = cli_runner.invoke(app, ["run", *HOMOGENEOUS])
    assert result.exit_code == 0, result.output
    return workdir / "out"


class TestRun:
    def test_writes_result_files(self, finished_run: Path) -> None:
        for name in (
            "diagnostics.csv",
            "summary.json",
            "report.txt",
            "phi.pgm",
            "trace.pgm",
            "psi.pgm",
            "phi_final.crf",
            "trajectory/trajectory.json",
            "trajectory/background/background.json",
        ):
            assert (finished_run / name).is_file(), name

    def test_summary_contents(self, finished_run: Path) -> None:
        summary = json.loads((finished_run / "summary.json").read_text())
        assert summary["schema_version"] == 1
        assert summary["background"]["scenario"] == "homogeneous"
        assert summary["flow"]["t_final"] == pytest.approx(6.0)
        assert summary["checks"]["violations"] == []

    def test_prints_constants(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(app, ["run", *HOMOGENEOUS])
        assert result.exit_code == 0
        assert "C_phi" in result.output
        assert "No violation flags" in result.output

    def test_unknown_preset(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(app, ["run", "--preset", "nope"])
        assert result.exit_code == 2
        assert "unknown preset" in result.output

    def test_invalid_override(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(app, ["run", "--resolution=15"])
        assert result.exit_code == 2
        assert not (workdir / "crf-out").exists()


class TestVerify:
    def test_stored_run(
        self, cli_runner: CliRunner, finished_run: Path
    ) -> None:
        result = cli_runner.invoke(
            app, ["verify", str(finished_run / "trajectory"), "--output-dir=out"]
        )
        assert result.exit_code == 0, result.output
        payload = json.loads((finished_run / "verify.json").read_text())
        assert payload["checks"]["violations"] == []

    def test_default_directory(
        self, cli_runner: CliRunner, finished_run: Path
    ) -> None:
        result = cli_runner.invoke(app, ["verify", "--output-dir=out"])
        assert result.exit_code == 0, result.output

    def test_missing_directory(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(app, ["verify", str(workdir / "absent")])
        assert result.exit_code == 2
        assert "not found" in result.output


class TestKE:
    def test_homogeneous(self, cli_runner: CliRunner, workdir: Path) -> None:
        args = ["ke", "--preset", "homogeneous", "--output-dir=out"]
        result = cli_runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        assert "Newton iterations" in result.output
        payload = json.loads((workdir / "out" / "ke.json").read_text())
        assert payload["ke"]["residual"] <= 1e-8
        assert "uniqueness" not in payload

    def test_compare_with_own_potential(
        self, cli_runner: CliRunner, workdir: Path
    ) -> None:
        args = ["ke", "--preset", "homogeneous", "--output-dir=out"]
        assert cli_runner.invoke(app, args).exit_code == 0
        theta = str(workdir / "out" / "theta.crf")
        result = cli_runner.invoke(app, [*args, "--compare", theta])
        assert result.exit_code == 0, result.output
        assert "sup |theta_A - theta_B|" in result.output
        payload = json.loads((workdir / "out" / "ke.json").read_text())
        assert payload["uniqueness"]["sup_difference"] == 0.0
        assert payload["uniqueness"]["c_eps_source"] == "rerun"


def test_selftest_passes(cli_runner: CliRunner, workdir: Path) -> None:
    result = cli_runner.invoke(app, ["selftest", "--output", "selftest.json"])
    assert result.exit_code == 0, result.output
    payload = json.loads((workdir / "selftest.json").read_text())
    assert payload["seed"] == 0
    assert all(case["passed"] for case in payload["cases"])
    assert len(payload["cases"]) == 10


class TestSelftestSeed:
    @pytest.fixture
    def seeds(self, monkeypatch: pytest.MonkeyPatch) -> list[int]:
        used: list[int] = []

        def fake_run(seed: int) -> list[object]:
            used.append(seed)
            return []

        monkeypatch.setattr(selftest_command, "run_selftest", fake_run)
        return used

    def test_seed_from_project_file(
        self, cli_runner: CliRunner, workdir: Path, seeds: list[int]
    ) -> None:
        (workdir / ".crflab.toml").write_text("seed = 7\n")
        result = cli_runner.invoke(app, ["selftest", "--output", "selftest.json"])
        assert result.exit_code == 0, result.output
        assert seeds == [7]
        assert "seed 7" in result.output
        payload = json.loads((workdir / "selftest.json").read_text())
        assert payload["seed"] == 7

    def test_flag_wins_over_config(
        self, cli_runner: CliRunner, workdir: Path, seeds: list[int]
    ) -> None:
        (workdir / ".crflab.toml").write_text("seed = 7\n")
        result = cli_runner.invoke(app, ["selftest", "--seed", "3"])
        assert result.exit_code == 0, result.output
        assert seeds == [3]

