"""Result files: diagnostics CSV, versioned JSON summary, text report, PGM heatmaps."""

from __future__ import annotations

import csv
import json
from collections.abc import Iterator, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from crflab.errors import ConfigError
from crflab.estimates import DiagnosticsRecord

SCHEMA_VERSION = 1


def write_diagnostics_csv(records: Sequence[DiagnosticsRecord], path: Path) -> Path:
    """One row per record; floats are written with ``repr`` so files are bit-exact."""
    if not records:
        raise ConfigError("no diagnostics records to write")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(records[0].columns())
        for record in records:
            writer.writerow([repr(float(v)) for v in record.row()])
    return path


def build_summary(sections: Mapping[str, Any]) -> dict[str, Any]:
    """Attach the schema version to the summary sections."""
    return {"schema_version": SCHEMA_VERSION, **sections}


def write_summary(summary: Mapping[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(summary, indent=2, sort_keys=True, default=_jsonable)
    path.write_text(text + "\n")
    return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _flatten(prefix: str, value: Any) -> Iterator[tuple[str, str]]:
    if isinstance(value, Mapping):
        for key in sorted(value, key=str):
            yield from _flatten(f"{prefix}.{key}" if prefix else str(key), value[key])
    elif isinstance(value, list) and value and isinstance(value[0], Mapping):
        for i, item in enumerate(value):
            yield from _flatten(f"{prefix}[{i}]", item)
    elif isinstance(value, list):
        # Long numeric series live in the CSV and the JSON summary.
        yield prefix, f"<{len(value)} values>" if len(value) > 6 else str(value)
    elif isinstance(value, float):
        yield prefix, f"{value:.6g}"
    else:
        yield prefix, str(value)


def write_report(summary: Mapping[str, Any], path: Path, width: int = 120) -> Path:
    """Aligned two-column text rendering of the summary."""
    table = Table(box=None, pad_edge=False)
    table.add_column("key")
    table.add_column("value")
    for key, value in _flatten("", summary):
        table.add_row(escape(key), escape(value))
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        console = Console(file=f, width=width, color_system=None, force_terminal=False)
        console.print(table)
    return path


def heatmap_plane(values: np.ndarray) -> np.ndarray:
    """The ``(x1, y1)`` plane of a field (the slice ``x2 = y2 = 0`` when n = 2)."""
    plane = np.real(values)
    while plane.ndim > 2:
        plane = plane[..., 0]
    return plane


def write_pgm(values: np.ndarray, path: Path) -> Path:
    """Binary 8-bit PGM; rows run along ``y1`` and columns along ``x1``."""
    plane = heatmap_plane(values).T
    finite = np.isfinite(plane)
    if not np.any(finite):
        raise ConfigError(f"cannot render {path.name}: no finite samples")
    lo, hi = float(np.min(plane[finite])), float(np.max(plane[finite]))
    span = hi - lo
    scaled = np.zeros(plane.shape) if span == 0 else (plane - lo) / span
    pixels = np.where(finite, np.rint(255.0 * scaled), 0).astype(np.uint8)
    height, width = pixels.shape
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(f"P5\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes())
    return path
