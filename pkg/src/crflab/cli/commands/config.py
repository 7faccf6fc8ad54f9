"""config subcommand: inspect and initialize run configuration."""

from __future__ import annotations

from pathlib import Path

import typer
from rich import print as rprint
from rich.markup import escape

from crflab.cli.common import (
    CONFIG_OPTION,
    OVERRIDE_CONTEXT,
    PRESET_OPTION,
    resolve,
    session,
)
from crflab.config.manager import write_default_config
from crflab.presets import list_presets, load_builtin_presets

config_app = typer.Typer(
    name="config",
    help="Inspect and initialize run configuration.",
    no_args_is_help=True,
)


@config_app.command("show", context_settings=OVERRIDE_CONTEXT)
def config_show(
    ctx: typer.Context,
    preset: str | None = PRESET_OPTION,
    config: Path | None = CONFIG_OPTION,
) -> None:
    """Show every resolved key with the source that set it."""
    with session():
        resolved = resolve(ctx.args, preset, config)
        items = resolved.items()
        width = max(len(key) for key, _, _ in items)
        for key, value, source in items:
            display = escape(str(value)) if value is not None else "(not set)"
            rprint(f"  {key:<{width}}  {display:<30}  ({source})")


@config_app.command("init")
def config_init(
    path: Path = typer.Argument(Path(".crflab.toml"), help="File to write"),
    force: bool = typer.Option(False, "--force", help="Overwrite an existing file"),
) -> None:
    """Write the default run config as a flat TOML file."""
    if path.exists() and not force:
        rprint(f"[red]Error: {path} exists (use --force to overwrite).[/red]")
        raise typer.Exit(code=2)
    write_default_config(path)
    rprint(f"[green]Wrote {path}[/green]")


@config_app.command("presets")
def config_presets() -> None:
    """List the builtin presets."""
    load_builtin_presets()
    for preset in sorted(list_presets(), key=lambda p: p.name):
        rprint(f"  {preset.name:<12}  {preset.description}")
