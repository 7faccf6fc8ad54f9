"""Helpers shared by the command modules: session setup, config, failures."""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import scipy.fft
import typer
from rich import print as rprint
from rich.markup import escape

from crflab.config import Settings
from crflab.config.manager import ResolvedConfig, parse_overrides, resolve_run_config
from crflab.errors import CRFError, LemmaViolationError
from crflab.logging import setup_logging

# Extra ``--key=value`` tokens are collected as run-config overrides.
OVERRIDE_CONTEXT = {"allow_extra_args": True, "ignore_unknown_options": True}


@contextmanager
def session() -> Iterator[Settings]:
    """Configure logging and the FFT worker count, and map errors to exit codes."""
    settings = Settings()
    setup_logging(settings)
    try:
        with scipy.fft.set_workers(settings.threads):
            yield settings
    except CRFError as exc:
        fail(exc)


def fail(exc: CRFError) -> None:
    rprint(f"[red]Error: {escape(str(exc))}[/red]")
    raise typer.Exit(code=exc.exit_code) from exc


def resolve(
    extra: list[str], preset: str | None, config_path: Path | None
) -> ResolvedConfig:
    return resolve_run_config(
        preset=preset, config_path=config_path, overrides=parse_overrides(extra)
    )


def check_violations(violations: list[str]) -> None:
    """Exit with the lemma-violation code when any flag was raised."""
    if violations:
        fail(LemmaViolationError("violation flags raised: " + ", ".join(violations)))
    rprint("[bright_green]No violation flags.[/bright_green]")


PRESET_OPTION = typer.Option(None, "--preset", "-p", help="Builtin preset name")
CONFIG_OPTION = typer.Option(
    None, "--config", "-c", help="Flat TOML run-config file", dir_okay=False
)
