"""Run-config loading and merging from presets, TOML files and overrides."""

from __future__ import annotations

import tomllib
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import tomli_w
from pydantic import ValidationError

from crflab.config.models import RunConfig
from crflab.errors import ConfigError
from crflab.logging import get_logger
from crflab.presets import get_preset, load_builtin_presets

_log = get_logger("crflab.config")

PROJECT_FILE = ".crflab.toml"


@dataclass
class ResolvedConfig:
    """A validated run config and the source that set each key."""

    config: RunConfig
    sources: dict[str, str] = field(default_factory=dict)

    def items(self) -> list[tuple[str, Any, str]]:
        values = self.config.model_dump(mode="json")
        return [(key, values[key], self.sources[key]) for key in RunConfig.model_fields]


def project_config_path(cwd: str | Path = ".") -> Path:
    return Path(cwd).resolve() / PROJECT_FILE


def read_toml(path: Path) -> dict[str, Any]:
    """Read a flat TOML run-config file."""
    try:
        with open(path, "rb") as f:
            return dict(tomllib.load(f))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc


def _coerce(raw: str) -> Any:
    """TOML literal when *raw* parses as one, else the bare string."""
    try:
        return tomllib.loads(f"value = {raw}")["value"]
    except tomllib.TOMLDecodeError:
        return raw


def parse_overrides(args: Sequence[str]) -> dict[str, Any]:
    """``--key=value`` pairs; dashes in keys read as underscores."""
    overrides: dict[str, Any] = {}
    for arg in args:
        if not arg.startswith("--") or "=" not in arg:
            raise ConfigError(f"override must look like --key=value, got {arg!r}")
        key, raw = arg[2:].split("=", 1)
        overrides[key.replace("-", "_")] = _coerce(raw)
    return overrides


def _check_keys(data: dict[str, Any], origin: str) -> None:
    unknown = sorted(set(data) - set(RunConfig.model_fields))
    if unknown:
        raise ConfigError(f"unknown config key(s) in {origin}: {', '.join(unknown)}")


def resolve_run_config(
    *,
    preset: str | None = None,
    config_path: Path | None = None,
    overrides: dict[str, Any] | None = None,
    cwd: str | Path = ".",
) -> ResolvedConfig:
    """Merge defaults, preset, project file, ``--config`` file and overrides."""
    merged: dict[str, Any] = {}
    sources = dict.fromkeys(RunConfig.model_fields, "default")

    layers: list[tuple[str, str, dict[str, Any]]] = []
    if preset is not None:
        load_builtin_presets()
        found = get_preset(preset)
        if found is None:
            raise ConfigError(f"unknown preset {preset!r}")
        layers.append(("preset", f"preset {preset!r}", found.values))
    project = project_config_path(cwd)
    if project.is_file():
        layers.append(("project", str(project), read_toml(project)))
    if config_path is not None:
        if not config_path.is_file():
            raise ConfigError(f"config file not found: {config_path}")
        layers.append(("file", str(config_path), read_toml(config_path)))
    if overrides:
        layers.append(("override", "command-line overrides", overrides))

    for source, origin, data in layers:
        _check_keys(data, origin)
        merged.update(data)
        sources.update(dict.fromkeys(data, source))

    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as exc:
        raise ConfigError(f"invalid run config: {_describe(exc)}") from exc
    _log.debug("config.resolved: %s", ", ".join(f"{k}={v}" for k, v in merged.items()))
    return ResolvedConfig(config, sources)


def _describe(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        where = ".".join(str(p) for p in error["loc"]) or "config"
        parts.append(f"{where}: {error['msg']}")
    return "; ".join(parts)


def write_default_config(path: Path, config: RunConfig | None = None) -> Path:
    """Write *config* (defaults when omitted) as a flat TOML file."""
    values = (config or RunConfig()).model_dump(mode="json", exclude_none=True)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        tomli_w.dump(values, f)
    return path
