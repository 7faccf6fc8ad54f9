"""Run presets: named bundles of run-config values loaded from YAML."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, cast

import yaml

from crflab.config.models import RunConfig
from crflab.errors import PresetValidationError


@dataclass
class Preset:
    """A named set of run-config overrides."""

    name: str
    description: str
    values: dict[str, Any] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# YAML Loader
# ---------------------------------------------------------------------------


def load_preset(path: Path) -> Preset:
    """Load a Preset from a YAML file; keys must be run-config keys."""
    with open(path) as f:
        raw = yaml.safe_load(f)

    if not isinstance(raw, dict):
        raise PresetValidationError(f"Preset file is not a YAML mapping: {path}")
    data = cast(dict[str, Any], raw)

    for required in ("name", "description", "values"):
        if required not in data:
            raise PresetValidationError(f"Preset '{path}' is missing '{required}'")

    values = data["values"]
    if not isinstance(values, dict):
        raise PresetValidationError(f"Preset '{path}' values must be a mapping")
    unknown = sorted(set(values) - set(RunConfig.model_fields))
    if unknown:
        raise PresetValidationError(
            f"Preset '{path}' sets unknown key(s): {', '.join(unknown)}"
        )

    return Preset(
        name=str(data["name"]),
        description=str(data["description"]),
        values=cast(dict[str, Any], values),
    )


# ---------------------------------------------------------------------------
# Preset Registry
# ---------------------------------------------------------------------------

_PRESETS: dict[str, Preset] = {}


def register_preset(preset: Preset) -> None:
    _PRESETS[preset.name] = preset


def get_preset(name: str) -> Preset | None:
    """Look up a preset by name. Returns None if not found."""
    return _PRESETS.get(name)


def list_presets() -> list[Preset]:
    return list(_PRESETS.values())


def clear_registry() -> None:
    """Remove all registered presets. Useful for testing."""
    _PRESETS.clear()


def load_builtin_presets() -> None:
    """Load all YAML presets from the builtin presets directory."""
    builtin_dir = Path(__file__).parent / "builtin"
    if not builtin_dir.is_dir():
        return
    for yaml_file in sorted(builtin_dir.glob("*.yaml")):
        register_preset(load_preset(yaml_file))
