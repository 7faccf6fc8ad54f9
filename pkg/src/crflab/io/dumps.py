"""Binary field dumps and on-disk backgrounds and trajectories.

A ``CRF1`` dump is the magic ``b"CRF1"``, a little-endian ``uint32`` rank,
``rank`` little-endian ``uint32`` extents, then the samples as row-major
little-endian complex doubles.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from crflab.background import BackgroundData
from crflab.errors import ConfigError
from crflab.flow import FlowConfig, Snapshot, Trajectory
from crflab.geometry import (
    DifferentiationMode,
    Form11Field,
    GridChart,
    MetricField,
    ScalarField,
    VolumeFormField,
)

MAGIC = b"CRF1"
FORMAT_VERSION = 1
BACKGROUND_INDEX = "background.json"
TRAJECTORY_INDEX = "trajectory.json"


def encode_field(values: np.ndarray) -> bytes:
    array = np.ascontiguousarray(values, dtype="<c16")
    header = np.array([array.ndim, *array.shape], dtype="<u4").tobytes()
    return MAGIC + header + array.tobytes()


def decode_field(data: bytes) -> np.ndarray:
    if len(data) < 8 or data[:4] != MAGIC:
        raise ConfigError("not a CRF1 field dump")
    rank = int(np.frombuffer(data, dtype="<u4", count=1, offset=4)[0])
    if len(data) < 8 + 4 * rank:
        raise ConfigError("truncated CRF1 header")
    extents = np.frombuffer(data, dtype="<u4", count=rank, offset=8)
    shape = tuple(int(d) for d in extents)
    offset = 8 + 4 * rank
    expected = offset + 16 * int(np.prod(shape, dtype=np.int64))
    if len(data) != expected:
        raise ConfigError(f"CRF1 dump has {len(data)} bytes, expected {expected}")
    return np.frombuffer(data, dtype="<c16", offset=offset).reshape(shape).copy()


def write_field(path: Path, values: np.ndarray) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_field(values))
    return path


def read_field(path: Path) -> np.ndarray:
    if not path.is_file():
        raise ConfigError(f"field dump not found: {path}")
    return decode_field(path.read_bytes())


def read_scalar(path: Path, chart: GridChart) -> ScalarField:
    """Read a real scalar dump (a potential) onto *chart*."""
    values = read_field(path)
    if values.shape != chart.shape:
        raise ConfigError(f"{path} has shape {values.shape}, expected {chart.shape}")
    return ScalarField(chart, values.real.copy())


def _write_json(path: Path, payload: dict[str, Any]) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _read_json(path: Path) -> dict[str, Any]:
    if not path.is_file():
        raise ConfigError(f"index not found: {path}")
    return json.loads(path.read_text())


# ---------------------------------------------------------------------------
# Backgrounds
# ---------------------------------------------------------------------------


def save_background(bg: BackgroundData, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    chart = bg.chart
    write_field(directory / "omega0.crf", bg.omega0.coeff)
    write_field(directory / "omega_inf.crf", bg.omega_inf.coeff)
    write_field(directory / "volume.crf", bg.volume_form.density)
    write_field(directory / "psi.crf", bg.psi.values)
    write_field(directory / "pole_mask.crf", bg.pole_mask.astype(float))
    index = {
        "format_version": FORMAT_VERSION,
        "chart": {
            "complex_dim": chart.complex_dim,
            "resolution": chart.resolution,
            "period": chart.period,
            "mode": str(chart.mode),
        },
        **bg.describe(),
    }
    _write_json(directory / BACKGROUND_INDEX, index)
    return directory


def load_background(directory: Path) -> BackgroundData:
    """Rebuild a background; construction re-runs every invariant check."""
    index = _read_json(directory / BACKGROUND_INDEX)
    if index.get("format_version") != FORMAT_VERSION:
        raise ConfigError(f"unsupported background format in {directory}")
    chart_index = index["chart"]
    chart = GridChart(
        complex_dim=chart_index["complex_dim"],
        resolution=chart_index["resolution"],
        period=chart_index["period"],
        mode=DifferentiationMode(chart_index["mode"]),
    )
    return BackgroundData(
        chart=chart,
        omega0=MetricField(chart, read_field(directory / "omega0.crf")),
        omega_inf=Form11Field(chart, read_field(directory / "omega_inf.crf")),
        volume_form=VolumeFormField(chart, read_field(directory / "volume.crf").real),
        psi=read_scalar(directory / "psi.crf", chart),
        pole_mask=read_field(directory / "pole_mask.crf").real > 0.5,
        c0=index["c0"],
        c_lemma33=index["c_lemma33"],
        psi_delta=index["psi_delta"],
        scenario=index["scenario"],
        parameters=index["parameters"],
        volume_normalized=index["volume_normalized"],
    )


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------


def save_trajectory(trajectory: Trajectory, directory: Path) -> Path:
    """Background, stacked ``phi`` and ``phidot`` dumps and a JSON index."""
    directory.mkdir(parents=True, exist_ok=True)
    save_background(trajectory.background, directory / "background")
    snaps = trajectory.snapshots
    write_field(directory / "phi.crf", np.stack([s.phi.values for s in snaps]))
    write_field(directory / "phidot.crf", np.stack([s.phidot.values for s in snaps]))
    index = {
        "format_version": FORMAT_VERSION,
        "config": trajectory.config.model_dump(mode="json"),
        "converged": trajectory.converged,
        "steps_taken": trajectory.steps_taken,
        "rejected_steps": trajectory.rejected_steps,
        "times": [s.t for s in snaps],
        "step_counts": [s.step_count for s in snaps],
        "metadata": trajectory.metadata,
    }
    _write_json(directory / TRAJECTORY_INDEX, index)
    return directory


def load_trajectory(directory: Path) -> Trajectory:
    index = _read_json(directory / TRAJECTORY_INDEX)
    if index.get("format_version") != FORMAT_VERSION:
        raise ConfigError(f"unsupported trajectory format in {directory}")
    bg = load_background(directory / "background")
    chart = bg.chart
    phi = read_field(directory / "phi.crf").real
    phidot = read_field(directory / "phidot.crf").real
    times = index["times"]
    if phi.shape != (len(times), *chart.shape) or phidot.shape != phi.shape:
        raise ConfigError(f"trajectory dumps in {directory} do not match the index")
    snapshots = [
        Snapshot(
            t,
            ScalarField(chart, phi[i].copy()),
            ScalarField(chart, phidot[i].copy()),
            count,
        )
        for i, (t, count) in enumerate(zip(times, index["step_counts"], strict=True))
    ]
    return Trajectory(
        background=bg,
        config=FlowConfig.model_validate(index["config"]),
        snapshots=snapshots,
        converged=index["converged"],
        steps_taken=index["steps_taken"],
        rejected_steps=index["rejected_steps"],
        metadata=index["metadata"],
    )
