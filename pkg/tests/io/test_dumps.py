"""Tests for field dumps and stored backgrounds and trajectories."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from crflab.background import BackgroundData, scenario_smooth
from crflab.errors import ConfigError
from crflab.flow import Trajectory
from crflab.geometry import GridChart
from crflab.io import (
    decode_field,
    encode_field,
    load_background,
    load_trajectory,
    read_field,
    read_scalar,
    save_background,
    save_trajectory,
    write_field,
)


class TestFieldDump:
    def test_header_layout(self) -> None:
        data = encode_field(np.zeros((2, 3)))
        assert data[:4] == b"CRF1"
        assert np.frombuffer(data[4:16], dtype="<u4").tolist() == [2, 2, 3]
        assert len(data) == 16 + 16 * 6

    def test_complex_samples_survive(self, tmp_path: Path) -> None:
        values = np.arange(6).reshape(3, 2) * (1.0 - 0.5j)
        path = write_field(tmp_path / "nested" / "field.crf", values)
        np.testing.assert_array_equal(read_field(path), values)

    @pytest.mark.parametrize(
        "data",
        [b"", b"XXXX\x00\x00\x00\x00", b"CRF1\x05\x00\x00\x00"],
        ids=["empty", "bad-magic", "truncated-header"],
    )
    def test_malformed_header(self, data: bytes) -> None:
        with pytest.raises(ConfigError):
            decode_field(data)

    def test_truncated_samples(self) -> None:
        data = encode_field(np.ones((4, 4)))
        with pytest.raises(ConfigError, match="bytes"):
            decode_field(data[:-16])

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match="not found"):
            read_field(tmp_path / "absent.crf")

    def test_scalar_shape_checked(self, tmp_path: Path) -> None:
        path = write_field(tmp_path / "phi.crf", np.zeros((8, 8)))
        with pytest.raises(ConfigError, match="shape"):
            read_scalar(path, GridChart(1, 16))


class TestBackgroundStore:
    def test_round_trip(self, tmp_path: Path) -> None:
        bg = scenario_smooth(16, 1, phase=0.1)
        loaded = load_background(save_background(bg, tmp_path / "bg"))
        assert loaded.chart == bg.chart
        assert loaded.c0 == bg.c0
        assert loaded.describe() == bg.describe()
        np.testing.assert_array_equal(loaded.omega0.coeff, bg.omega0.coeff)
        np.testing.assert_array_equal(
            loaded.volume_form.density, bg.volume_form.density
        )

    def test_pole_mask_preserved(
        self, tmp_path: Path, degenerate_bg: BackgroundData
    ) -> None:
        loaded = load_background(save_background(degenerate_bg, tmp_path / "bg"))
        np.testing.assert_array_equal(loaded.pole_mask, degenerate_bg.pole_mask)
        assert loaded.psi_delta == degenerate_bg.psi_delta

    def test_unknown_format_version(
        self, tmp_path: Path, homogeneous_bg: BackgroundData
    ) -> None:
        directory = save_background(homogeneous_bg, tmp_path / "bg")
        index = directory / "background.json"
        payload = json.loads(index.read_text())
        payload["format_version"] = 99
        index.write_text(json.dumps(payload))
        with pytest.raises(ConfigError, match="unsupported"):
            load_background(directory)

    def test_missing_index(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match="index not found"):
            load_background(tmp_path)


class TestTrajectoryStore:
    def test_round_trip(
        self, tmp_path: Path, homogeneous_trajectory: Trajectory
    ) -> None:
        loaded = load_trajectory(
            save_trajectory(homogeneous_trajectory, tmp_path / "run")
        )
        assert loaded.config == homogeneous_trajectory.config
        assert loaded.converged == homogeneous_trajectory.converged
        np.testing.assert_array_equal(loaded.times, homogeneous_trajectory.times)
        for a, b in zip(
            loaded.snapshots, homogeneous_trajectory.snapshots, strict=True
        ):
            np.testing.assert_array_equal(a.phi.values, b.phi.values)
            np.testing.assert_array_equal(a.phidot.values, b.phidot.values)
            assert a.step_count == b.step_count

    def test_index_must_match_dumps(
        self, tmp_path: Path, homogeneous_trajectory: Trajectory
    ) -> None:
        directory = save_trajectory(homogeneous_trajectory, tmp_path / "run")
        index = directory / "trajectory.json"
        payload = json.loads(index.read_text())
        payload["times"] = payload["times"][:-1]
        index.write_text(json.dumps(payload))
        with pytest.raises(ConfigError, match="do not match"):
            load_trajectory(directory)
