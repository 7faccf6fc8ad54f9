"""selftest command: the fast example suite with a pass/fail table."""

from __future__ import annotations

from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

from crflab.cli.common import CONFIG_OPTION, PRESET_OPTION, resolve, session
from crflab.io import build_summary, write_summary
from crflab.selftest import run_selftest


def selftest(
    ctx: typer.Context,
    preset: str | None = PRESET_OPTION,
    config: Path | None = CONFIG_OPTION,
    seed: int | None = typer.Option(
        None, "--seed", help="Seed for randomized test fields (default: config seed)"
    ),
    output: Path | None = typer.Option(
        None, "--output", "-o", help="Also write the results as JSON to this file"
    ),
) -> None:
    """Run the built-in examples; exits 1 when any case fails."""
    with session():
        if seed is None:
            seed = resolve(ctx.args, preset, config).config.seed
        results = run_selftest(seed)
        table = Table(title=f"crflab selftest (seed {seed})")
        table.add_column("case")
        table.add_column("value", justify="right")
        table.add_column("tolerance", justify="right")
        table.add_column("result")
        for r in results:
            verdict = (
                "[bright_green]PASS[/bright_green]" if r.passed else "[red]FAIL[/red]"
            )
            table.add_row(r.name, f"{r.value:.3e}", f"{r.tolerance:.0e}", verdict)
        Console().print(table)
        if output is not None:
            cases = [r.to_dict() for r in results]
            summary = build_summary({"seed": seed, "cases": cases})
            write_summary(summary, output)
        if not all(r.passed for r in results):
            raise typer.Exit(code=1)
