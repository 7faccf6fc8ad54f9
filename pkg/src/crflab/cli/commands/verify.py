"""verify command: re-run the lemma suite on a stored trajectory."""

from __future__ import annotations

from pathlib import Path

import typer
from rich.console import Console

from crflab.cli.commands.run import constants_table
from crflab.cli.common import (
    CONFIG_OPTION,
    PRESET_OPTION,
    check_violations,
    resolve,
    session,
)
from crflab.pipeline import TRAJECTORY_DIR, execute_verify


def verify(
    ctx: typer.Context,
    trajectory: Path | None = typer.Argument(
        None, help="Stored trajectory directory (default: <output_dir>/trajectory)"
    ),
    preset: str | None = PRESET_OPTION,
    config: Path | None = CONFIG_OPTION,
) -> None:
    """Check every lemma on a stored run; exits 3 when a violation flag is raised."""
    with session():
        cfg = resolve(ctx.args, preset, config).config
        directory = trajectory or Path(cfg.output_dir) / TRAJECTORY_DIR
        report = execute_verify(directory, cfg)
        Console().print(constants_table(report))
        check_violations(report.violations)
