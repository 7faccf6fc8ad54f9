"""Tests for the config subcommands."""

from __future__ import annotations

from pathlib import Path

from typer.testing import CliRunner

from crflab.cli.app import app
from crflab.config.manager import read_toml


class TestConfigShow:
    def test_defaults(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(app, ["config", "show"])
        assert result.exit_code == 0
        assert "resolution" in result.output
        assert "(default)" in result.output

    def test_sources(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(
            app, ["config", "show", "--preset", "homogeneous", "--t-max=3"]
        )
        assert result.exit_code == 0
        lines = result.output.splitlines()
        t_max = next(line for line in lines if line.strip().startswith("t_max"))
        assert "(override)" in t_max
        a0 = next(line for line in lines if line.strip().startswith("a0"))
        assert "(preset)" in a0

    def test_unknown_preset(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(app, ["config", "show", "--preset", "nope"])
        assert result.exit_code == 2
        assert "unknown preset" in result.output

    def test_bad_override(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(app, ["config", "show", "--resolution=15"])
        assert result.exit_code == 2


class TestConfigInit:
    def test_writes_default_file(self, cli_runner: CliRunner, workdir: Path) -> None:
        result = cli_runner.invoke(app, ["config", "init"])
        assert result.exit_code == 0
        data = read_toml(workdir / ".crflab.toml")
        assert data["scenario"] == "smooth"

    def test_refuses_to_overwrite(self, cli_runner: CliRunner, workdir: Path) -> None:
        target = workdir / "run.toml"
        target.write_text("t_max = 1.0\n")
        result = cli_runner.invoke(app, ["config", "init", str(target)])
        assert result.exit_code == 2
        assert target.read_text() == "t_max = 1.0\n"

    def test_force(self, cli_runner: CliRunner, workdir: Path) -> None:
        target = workdir / "run.toml"
        target.write_text("t_max = 1.0\n")
        result = cli_runner.invoke(app, ["config", "init", str(target), "--force"])
        assert result.exit_code == 0
        assert read_toml(target)["t_max"] == 30.0


def test_presets_lists_builtins(cli_runner: CliRunner, workdir: Path) -> None:
    result = cli_runner.invoke(app, ["config", "presets"])
    assert result.exit_code == 0
    for name in ("smooth", "degenerate", "homogeneous", "fixed-point", "torsion"):
        assert name in result.output
