"""Unit tests for configuration loading, writers and the command-line entry point."""

import json
import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
import yaml

from src.cli import OutputFormat, RunMode, load_config, parse_config, run
from src.cli.main import main
from src.cli.writers import REDUCED_COLUMNS, write_json
from src.core import (
    ConfigFileNotFoundError,
    ConfigSyntaxError,
    ConfigUnknownKeyError,
    ConfigValidationError,
)
from src.core.constants import TWO_PI
from src.models import DriveShape

CONFIG_DIR = Path(__file__).resolve().parents[2] / "config"


def write_yaml(path: Path, data) -> Path:
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


@pytest.fixture
def reduced_config(tmp_path):
    """Gas-limit reduced run writing into tmp_path/out."""
    return {
        "mode": "simulate-reduced",
        "material": {"name": "gas", "w12": 0.0, "w13": 0.0},
        "g2n": 1e12,
        "drive": {"shape": "constant", "omega0": 1e6, "t_start": 0.0, "t_end": 1e-4},
        "grid": {"z_max": 40000.0, "n_z": 128, "dt": 1e-6, "t_max": 1e-4, "n_snapshots": 5},
        "reduced": {"pulse_center": 10000.0, "pulse_width": 3000.0},
        "output": str(tmp_path / "out"),
    }


class TestParseConfig:
    """File-level errors and their exit codes."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigFileNotFoundError) as info:
            parse_config(tmp_path / "nope.yaml")
        assert info.value.exit_code == 3

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("mode: [feasibility\n", encoding="utf-8")
        with pytest.raises(ConfigSyntaxError):
            parse_config(path)

    def test_top_level_must_be_mapping(self, tmp_path):
        with pytest.raises(ConfigSyntaxError):
            parse_config(write_yaml(tmp_path / "list.yaml", [1, 2]))

    def test_example_files_load(self):
        assert parse_config(CONFIG_DIR / "example_feasibility.yaml").mode == RunMode.FEASIBILITY
        assert parse_config(CONFIG_DIR / "example_reduced.yaml").mode == RunMode.SIMULATE_REDUCED
        assert parse_config(CONFIG_DIR / "example_full.yaml").mode == RunMode.SIMULATE_FULL

    def test_unsigned_exponents_are_numbers(self, tmp_path):
        path = tmp_path / "sci.yaml"
        path.write_text(
            "mode: feasibility\n"
            "material:\n"
            "  name: sci\n"
            "  w13_hz: 1e9\n"
            "  w12_hz: 1.0e4\n"
            "g2n: 1e24\n"
            "drive:\n"
            "  shape: constant\n"
            "  omega0: 1e8\n"
            "  t_start: 0\n"
            "  t_end: 1.0e-5\n",
            encoding="utf-8",
        )
        config = parse_config(path)
        assert config.material.w13 == pytest.approx(TWO_PI * 1e9)
        assert config.material.w12 == pytest.approx(TWO_PI * 1e4)
        assert config.g2n == pytest.approx(1e24)
        assert config.drive.omega0 == pytest.approx(1e8)


class TestLoadConfig:
    """Schema validation and unit handling."""

    def test_unknown_key(self):
        with pytest.raises(ConfigUnknownKeyError) as info:
            load_config({"mode": "validate", "bogus": 1})
        assert info.value.key_paths == ["bogus"]

    def test_invalid_value(self):
        with pytest.raises(ConfigValidationError) as info:
            load_config({"mode": "feasibility", "material": "rare-earth-crystal-typical", "g2n": -1.0})
        assert "g2n" in info.value.key_paths

    def test_unknown_preset(self):
        with pytest.raises(ConfigValidationError):
            load_config({"mode": "feasibility", "material": "unobtainium"})

    def test_hz_suffix_converted(self):
        config = load_config(
            {"mode": "feasibility", "material": {"w12_hz": 1e4, "w13_hz": 1e9, "gamma13_rad_s": 1e7}}
        )
        assert config.material.w12 == pytest.approx(TWO_PI * 1e4)
        assert config.material.w13 == pytest.approx(TWO_PI * 1e9)
        assert config.material.gamma13 == pytest.approx(1e7)

    def test_suffix_on_non_rate_key(self):
        with pytest.raises(ConfigUnknownKeyError):
            load_config({"mode": "feasibility", "material": {"w12": 1.0, "w13": 10.0, "density_hz": 1.0}})

    def test_duplicate_rate(self):
        with pytest.raises(ConfigValidationError):
            load_config({"mode": "feasibility", "material": {"w12": 1.0, "w12_hz": 1.0, "w13": 10.0}})

    def test_preset_with_overrides(self):
        config = load_config({"mode": "feasibility", "material": {"preset": "rare-earth-crystal-typical", "density": 1e23}})
        assert config.material.density == 1e23
        assert config.material.w13 == pytest.approx(TWO_PI * 1e9)

    def test_feasibility_defaults(self, rare_earth):
        config = load_config({"material": "rare-earth-crystal-typical"}, mode="feasibility")
        assert config.drive.shape == DriveShape.LINEAR_RAMP
        assert config.drive.omega0 == pytest.approx(math.sqrt(1e17))
        assert config.drive.field_ratio_k(rare_earth.w_product) == pytest.approx(3.0)
        assert config.drive.ramp_duration == pytest.approx(1e-5)
        assert config.probe.duration == pytest.approx(1e-6)

    def test_broad_line_default_starts_above_broadening(self):
        config = load_config({"material": "doped-fiber-indicative"}, mode="feasibility")
        root_w = math.sqrt(config.material.w_product)
        assert config.drive.omega0 == pytest.approx(10 * root_w)
        assert config.drive.omega_tau < config.drive.omega0

    def test_mode_mismatch(self):
        with pytest.raises(ConfigValidationError) as info:
            load_config({"mode": "validate"}, mode="feasibility")
        assert info.value.key_paths == ["mode"]

    def test_missing_sections(self):
        with pytest.raises(ConfigValidationError):
            load_config({"mode": "simulate-full", "material": "rare-earth-crystal-typical"})

    def test_formats_from_string(self):
        config = load_config({"mode": "validate", "formats": "json"})
        assert config.formats == [OutputFormat.JSON]


def test_json_writer_nulls_non_finite(tmp_path):
    path = write_json({"a": float("inf"), "b": [1.0, float("nan")]}, tmp_path / "x.json")
    document = json.loads(path.read_text())
    assert document["a"] is None
    assert document["b"] == [1.0, None]
    assert document["schema_version"] == "1.0"


class TestRun:
    """Runs dispatched from a configuration."""

    def test_reduced_gas_limit(self, reduced_config, tmp_path):
        config = load_config(reduced_config)
        assert run(config) == 0
        out = tmp_path / "out"
        frame = pd.read_csv(out / "polariton.csv", comment="#")
        assert list(frame.columns) == REDUCED_COLUMNS
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["efficiency"] == pytest.approx(1.0, abs=1e-6)
        assert metrics["predicted_efficiency"] == pytest.approx(1.0)
        assert json.loads((out / "metadata.json").read_text())["mode"] == "simulate-reduced"

    def test_data_files_are_deterministic(self, reduced_config, tmp_path):
        first = load_config({**reduced_config, "output": str(tmp_path / "a")})
        second = load_config({**reduced_config, "output": str(tmp_path / "b")})
        run(first)
        run(second)
        for name in ("polariton.csv", "metrics.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_json_only(self, reduced_config, tmp_path):
        run(load_config({**reduced_config, "formats": ["json"]}))
        assert not (tmp_path / "out" / "polariton.csv").exists()
        assert (tmp_path / "out" / "metrics.json").exists()


class TestMain:
    """Exit codes of the command-line entry point."""

    def test_feasibility_example(self, tmp_path, capsys):
        code = main(["feasibility", "--config", str(CONFIG_DIR / "example_feasibility.yaml"), "--output", str(tmp_path)])
        assert code == 0
        assert "Verdict: PASS" in capsys.readouterr().out
        report = json.loads((tmp_path / "feasibility.json").read_text())
        assert report["verdict"] is True
        conditions = pd.read_csv(tmp_path / "conditions.csv", comment="#")
        assert "power condition" in set(conditions["name"])
        assert (tmp_path / "metadata.json").exists()

    def test_missing_config_file(self, tmp_path):
        assert main(["feasibility", "--config", str(tmp_path / "missing.yaml")]) == 3

    def test_unknown_key_exit_code(self, tmp_path):
        path = write_yaml(tmp_path / "c.yaml", {"mode": "validate", "colour": "blue"})
        assert main(["validate", "--config", str(path)]) == 5

    def test_feasibility_without_material(self, tmp_path):
        assert main(["feasibility", "--output", str(tmp_path)]) == 6

    def test_bad_workers(self, tmp_path):
        path = write_yaml(tmp_path / "c.yaml", {"material": "rare-earth-crystal-typical"})
        assert main(["feasibility", "--config", str(path), "--workers", "0"]) == 6

    def test_bad_format(self, tmp_path):
        path = write_yaml(tmp_path / "c.yaml", {"material": "rare-earth-crystal-typical"})
        assert main(["feasibility", "--config", str(path), "--format", "xml"]) == 6

    def test_failed_run_leaves_no_output(self, reduced_config, tmp_path):
        reduced_config["drive"] = {"omega0": 1e6, "omega_tau": 0.0, "t_start": 0.0, "t_end": 5e-5}
        path = write_yaml(tmp_path / "c.yaml", reduced_config)
        assert main(["simulate-reduced", "--config", str(path)]) == 1
        assert not (tmp_path / "out").exists()

    def test_format_override(self, reduced_config, tmp_path):
        path = write_yaml(tmp_path / "c.yaml", reduced_config)
        assert main(["simulate-reduced", "--config", str(path), "--format", "csv"]) == 0
        files = sorted(p.name for p in (tmp_path / "out").iterdir())
        assert files == ["metadata.json", "polariton.csv"]
        frame = pd.read_csv(tmp_path / "out" / "polariton.csv", comment="#")
        assert np.all(np.isfinite(frame["re_psi"]))
