"""Tests for config manager: parse, merge, persist."""

from __future__ import annotations

import tomllib
from collections.abc import Callable
from pathlib import Path

import pytest

from crflab.config.manager import (
    PROJECT_FILE,
    parse_overrides,
    read_toml,
    resolve_run_config,
    write_default_config,
)
from crflab.config.models import RunConfig, ScenarioName
from crflab.errors import ConfigError
from crflab.flow import Scheme

WriteToml = Callable[[Path, dict[str, object]], Path]


class TestParseOverrides:
    def test_literals_are_coerced(self) -> None:
        overrides = parse_overrides(
            ["--t-max=5", "--scheme=imex", "--eps-list=[0.5, 1.0]", "--ke_tol=1e-9"]
        )
        assert overrides == {
            "t_max": 5,
            "scheme": "imex",
            "eps_list": [0.5, 1.0],
            "ke_tol": 1e-9,
        }

    def test_bare_words_stay_strings(self) -> None:
        assert parse_overrides(["--output-dir=out/run1"]) == {"output_dir": "out/run1"}

    def test_value_may_contain_equals(self) -> None:
        assert parse_overrides(["--output-dir=a=b"]) == {"output_dir": "a=b"}

    @pytest.mark.parametrize("arg", ["t-max=5", "--t-max", "-t=5"])
    def test_malformed(self, arg: str) -> None:
        with pytest.raises(ConfigError, match="--key=value"):
            parse_overrides([arg])


class TestResolveRunConfig:
    """Test precedence: defaults < preset < project file < --config < overrides."""

    def test_defaults(self, project_dir: Path) -> None:
        resolved = resolve_run_config(cwd=project_dir)
        assert resolved.config == RunConfig()
        assert {source for _, _, source in resolved.items()} == {"default"}

    def test_preset_layer(self, project_dir: Path) -> None:
        resolved = resolve_run_config(preset="homogeneous", cwd=project_dir)
        assert resolved.config.scenario is ScenarioName.homogeneous
        assert resolved.config.dt_max == 0.01
        assert resolved.sources["dt_max"] == "preset"
        assert resolved.sources["ke_tol"] == "default"

    def test_precedence_chain(self, project_dir: Path, write_toml: WriteToml) -> None:
        write_toml(project_dir / PROJECT_FILE, {"t_max": 4.0, "resolution": 16})
        config_file = write_toml(project_dir / "run.toml", {"t_max": 3.0})
        resolved = resolve_run_config(
            preset="homogeneous",
            config_path=config_file,
            overrides={"snapshot_every": 0.5},
            cwd=project_dir,
        )
        assert resolved.config.t_max == 3.0
        assert resolved.config.resolution == 16
        assert resolved.config.snapshot_every == 0.5
        assert resolved.config.a0 == 2.0
        assert resolved.sources["t_max"] == "file"
        assert resolved.sources["resolution"] == "project"
        assert resolved.sources["snapshot_every"] == "override"
        assert resolved.sources["a0"] == "preset"

    def test_items_cover_every_key(self, project_dir: Path) -> None:
        items = resolve_run_config(cwd=project_dir).items()
        assert [key for key, _, _ in items] == list(RunConfig.model_fields)

    def test_unknown_preset(self, project_dir: Path) -> None:
        with pytest.raises(ConfigError, match="unknown preset"):
            resolve_run_config(preset="nope", cwd=project_dir)

    def test_unknown_key_names_origin(
        self, project_dir: Path, write_toml: WriteToml
    ) -> None:
        write_toml(project_dir / PROJECT_FILE, {"colour": "red"})
        with pytest.raises(ConfigError, match="colour"):
            resolve_run_config(cwd=project_dir)

    def test_missing_config_file(self, project_dir: Path) -> None:
        with pytest.raises(ConfigError, match="not found"):
            resolve_run_config(config_path=project_dir / "absent.toml", cwd=project_dir)

    def test_invalid_value_is_config_error(self, project_dir: Path) -> None:
        with pytest.raises(ConfigError, match="resolution"):
            resolve_run_config(overrides={"resolution": 15}, cwd=project_dir)

    def test_unparseable_toml(self, project_dir: Path) -> None:
        (project_dir / PROJECT_FILE).write_text("t_max = = 3\n")
        with pytest.raises(ConfigError, match="cannot parse"):
            resolve_run_config(cwd=project_dir)


class TestWriteDefaultConfig:
    def test_round_trips_through_resolution(self, project_dir: Path) -> None:
        path = write_default_config(project_dir / PROJECT_FILE)
        data = read_toml(path)
        assert data["scenario"] == "smooth"
        assert "background_path" not in data
        resolved = resolve_run_config(cwd=project_dir)
        assert resolved.config == RunConfig()
        assert resolved.sources["t_max"] == "project"

    def test_writes_given_config(self, project_dir: Path) -> None:
        config = RunConfig(scheme=Scheme.imex, t_max=2.0)
        path = write_default_config(project_dir / "nested" / "run.toml", config)
        with open(path, "rb") as f:
            data = tomllib.load(f)
        assert data["scheme"] == "imex"
        assert data["t_max"] == 2.0
