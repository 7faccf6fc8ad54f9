"""Typer CLI application definition for crflab."""

from __future__ import annotations

import importlib.metadata

import typer

from crflab.cli.commands.config import config_app
from crflab.cli.commands.ke import ke
from crflab.cli.commands.run import run
from crflab.cli.commands.selftest import selftest
from crflab.cli.commands.verify import verify
from crflab.cli.common import OVERRIDE_CONTEXT

app = typer.Typer(
    name="crf",
    help="Chern-Ricci flow numerical laboratory",
    no_args_is_help=True,
)

app.command("run", context_settings=OVERRIDE_CONTEXT)(run)
app.command("verify", context_settings=OVERRIDE_CONTEXT)(verify)
app.command("ke", context_settings=OVERRIDE_CONTEXT)(ke)
app.command("selftest", context_settings=OVERRIDE_CONTEXT)(selftest)
app.add_typer(config_app, name="config")


def version_callback(value: bool) -> None:
    if value:
        print(f"crflab {importlib.metadata.version('crflab')}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        False,
        "--version",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit.",
    ),
) -> None:
    """Chern-Ricci flow numerical laboratory."""
