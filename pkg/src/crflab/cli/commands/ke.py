"""ke command: solve for the Kähler-Einstein potential and check it."""

from __future__ import annotations

from pathlib import Path

import typer
from rich import print as rprint

from crflab.cli.common import (
    CONFIG_OPTION,
    PRESET_OPTION,
    check_violations,
    resolve,
    session,
)
from crflab.pipeline import execute_ke


def ke(
    ctx: typer.Context,
    preset: str | None = PRESET_OPTION,
    config: Path | None = CONFIG_OPTION,
    compare: Path | None = typer.Option(
        None, "--compare", help="CRF1 dump of a flow-limit potential to compare with"
    ),
) -> None:
    """Newton solve, Einstein residual, volume pinch and optional uniqueness check."""
    with session():
        cfg = resolve(ctx.args, preset, config).config
        outcome = execute_ke(cfg, compare)
        sol = outcome.solution
        rprint(f"Newton iterations: {sol.newton_iters}")
        rprint(f"||F(theta)||        {sol.residual:.3e}")
        rprint(f"||Ric + omega||     {outcome.einstein_residual:.3e}")
        pinch = outcome.pinch
        rprint(
            f"omega^n / Omega in [{pinch.inf_volume_ratio:.6g}, "
            f"{pinch.sup_volume_ratio:.6g}]"
        )
        if outcome.uniqueness is not None:
            rprint(f"sup |theta_A - theta_B| {outcome.uniqueness.sup_difference:.3e}")
        check_violations(outcome.violations)
