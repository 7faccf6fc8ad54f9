"""run command: flow a scenario, check every lemma, write the result files."""

from __future__ import annotations

from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

from crflab.cli.common import (
    CONFIG_OPTION,
    PRESET_OPTION,
    check_violations,
    resolve,
    session,
)
from crflab.estimates import CheckReport
from crflab.pipeline import execute_run


def constants_table(report: CheckReport) -> Table:
    """Fitted constants with their stability margin (final-third drift)."""
    table = Table(title=f"Constants ({report.scenario})")
    table.add_column("constant")
    table.add_column("value", justify="right")
    table.add_column("drift", justify="right")
    rows = [
        ("C_phi", report.upper.c_phi.value, report.upper.c_phi.drift),
        ("C_phidot", report.upper.c_phidot.value, report.upper.c_phidot.drift),
        ("C_vol", report.upper.c_vol.value, report.upper.c_vol.drift),
        *(
            (f"C_eps[{e.epsilon:g}]", e.c_eps, e.inf_q.drift)
            for e in report.lower.entries
        ),
        ("C_evo", report.constants.c_evo, None),
        ("A", report.constants.a, None),
        ("C0", report.constants.c0_shift, None),
        ("C", report.trace.c_exponent, None),
        ("C'", report.trace.c_prime, None),
        (
            "C''",
            report.trace.c_double_prime.value,
            report.trace.c_double_prime.drift,
        ),
    ]
    for name, value, drift in rows:
        table.add_row(name, f"{value:.6g}", "" if drift is None else f"{drift:.2%}")
    return table


def run(
    ctx: typer.Context,
    preset: str | None = PRESET_OPTION,
    config: Path | None = CONFIG_OPTION,
) -> None:
    """Run the flow and the lemma suite; extra --key=value pairs override the config."""
    with session():
        resolved = resolve(ctx.args, preset, config)
        outcome = execute_run(resolved.config)
        console = Console()
        console.print(constants_table(outcome.report))
        trajectory = outcome.trajectory
        console.print(
            f"t = {trajectory.final.t:g}, converged = {trajectory.converged}, "
            f"results in {outcome.output_dir}"
        )
        check_violations(outcome.report.violations)
