"""Time-series helpers: running extremes, final-third drift, centered differences."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from crflab.estimates.models import STABILITY_RTOL, SeriesStability

FINAL_FRACTION = 2.0 / 3.0
SCALE_FLOOR = 1.0


def running_extreme(values: Sequence[float], kind: str = "max") -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if kind == "max":
        return np.maximum.accumulate(array)
    if kind == "min":
        return np.minimum.accumulate(array)
    raise ValueError(f"kind must be 'max' or 'min', got {kind!r}")


def _final_third_start(times: np.ndarray) -> int:
    cutoff = times[0] + FINAL_FRACTION * (times[-1] - times[0])
    return int(np.searchsorted(times, cutoff - 1e-12))


def stability(
    times: Sequence[float], values: Sequence[float], kind: str = "max"
) -> SeriesStability:
    """Running sup (or inf) at the end and its relative change over the final third.

    The change is relative for values of magnitude above one and absolute
    below, so series settling at zero do not read as drifting. A series is
    flagged unbounded when the drift exceeds the tolerance and the
    raw values move monotonically outward over the whole final third.
    """
    t = np.asarray(times, dtype=float)
    raw = np.asarray(values, dtype=float)
    running = running_extreme(raw, kind)
    if len(t) < 2:
        return SeriesStability(float(running[-1]), 0.0)
    start = _final_third_start(t)
    begin, end = float(running[start]), float(running[-1])
    drift = abs(end - begin) / max(abs(begin), abs(end), SCALE_FLOOR)
    tail = raw[start:]
    outward = np.diff(tail) > 0 if kind == "max" else np.diff(tail) < 0
    unbounded = bool(drift > STABILITY_RTOL and len(tail) > 2 and np.all(outward))
    return SeriesStability(end, drift, unbounded)


def centered_difference(
    before: np.ndarray, after: np.ndarray, spacing: float
) -> np.ndarray:
    return (after - before) / (2.0 * spacing)
