"""Tests for RunConfig validation."""

from __future__ import annotations

import pytest
from pydantic import ValidationError

from crflab.config import Settings
from crflab.config.models import RunConfig, ScenarioName
from crflab.flow import FlowConfig, Scheme


class TestRunConfig:
    def test_defaults(self) -> None:
        config = RunConfig()
        assert config.scenario is ScenarioName.smooth
        assert config.resolution == 32
        assert config.eps_list == [0.1, 0.25, 0.5, 1.0]
        assert config.output_dir == "crf-out"

    @pytest.mark.parametrize(
        "values",
        [
            {"resolution": 33},
            {"resolution": 8},
            {"n": 3},
            {"amplitude": 1.0},
            {"eps_list": []},
            {"eps_list": [0.0]},
            {"eps_list": [1.5]},
            {"diagnostics_stride": 0},
            {"dt_initial": 0.1, "dt_max": 0.05},
            {"scenario": "torsion", "n": 1},
            {"scenario": "from-file"},
            {"scenario": "sphere"},
            {"colour": "red"},
        ],
    )
    def test_rejected(self, values: dict[str, object]) -> None:
        with pytest.raises(ValidationError):
            RunConfig.model_validate(values)

    def test_from_file_with_path(self) -> None:
        config = RunConfig(scenario=ScenarioName.from_file, background_path="bg")
        assert config.background_path == "bg"

    def test_flow_config(self) -> None:
        config = RunConfig(scheme=Scheme.imex, t_max=7.0, snapshot_every=0.5)
        flow = config.flow_config()
        assert isinstance(flow, FlowConfig)
        assert flow.scheme is Scheme.imex
        assert flow.t_max == 7.0
        assert flow.snapshot_every == 0.5


class TestSettings:
    def test_defaults(self, test_settings: Settings) -> None:
        assert test_settings.log_level == "DEBUG"
        assert test_settings.threads == 1

    def test_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("CRF_LOG_FORMAT", "text")
        monkeypatch.setenv("CRF_THREADS", "4")
        settings = Settings(_env_file=None)  # type: ignore[call-arg]
        assert settings.log_format == "text"
        assert settings.threads == 4

    def test_threads_must_be_positive(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("CRF_THREADS", "0")
        with pytest.raises(ValidationError):
            Settings(_env_file=None)  # type: ignore[call-arg]
