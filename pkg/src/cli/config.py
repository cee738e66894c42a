"""Run configuration: YAML parsing, unit suffixes and strict validation."""

import math
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import settings
from src.core.constants import TWO_PI
from src.core.errors import (
    ConfigFileNotFoundError,
    ConfigSyntaxError,
    ConfigUnknownKeyError,
    ConfigValidationError,
    DomainError,
)
from src.feasibility.presets import get_preset
from src.models.specs import DriveSchedule, DriveShape, MaterialSpec, ProbeSpec, SimGrid
from src.polariton.kinematics import CscTermConvention
from src.polariton.reduced import ReducedMethod, ReducedModel

# Worked numbers of the rare-earth storage estimate
DEFAULT_OMEGA0 = math.sqrt(1e17)
DEFAULT_FIELD_RATIO = 3.0
DEFAULT_RAMP_DURATION = 1e-5
DEFAULT_PROBE_DURATION = 1e-6
DEFAULT_SLOW_ENTRY_FACTOR = 10.0

# Keys that hold angular frequencies and may carry a unit suffix
RATE_KEYS = {
    "w12",
    "w13",
    "gamma1",
    "gamma2",
    "gamma3",
    "gamma12",
    "gamma13",
    "gamma23",
    "omega0",
    "omega_tau",
    "omega_final",
    "probe_detuning",
    "control_detuning",
}
HZ_SUFFIX = "_hz"
RAD_S_SUFFIX = "_rad_s"

# YAML 1.1 floats plus exponents without a dot or sign, e.g. 1e17 and 1.0e9
_FLOAT_PATTERN = re.compile(
    r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
    |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
    |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
    |[-+]?\.(?:inf|Inf|INF)
    |\.(?:nan|NaN|NAN))$""",
    re.X,
)


class ConfigLoader(yaml.SafeLoader):
    """Safe loader that reads scientific notation as floats."""


ConfigLoader.yaml_implicit_resolvers = {
    first: [(tag, regexp) for tag, regexp in resolvers if tag != "tag:yaml.org,2002:float"]
    for first, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}
ConfigLoader.add_implicit_resolver("tag:yaml.org,2002:float", _FLOAT_PATTERN, list("-+0123456789."))


def _resolve_material(value: Any) -> Any:
    """A string, or a mapping with a `preset` key, names a built-in material."""
    if isinstance(value, str):
        return get_preset(value)
    if isinstance(value, dict) and "preset" in value:
        overrides = dict(value)
        data = get_preset(overrides.pop("preset")).model_dump()
        data.update(overrides)
        return data
    return value


class RunMode(Enum):
    """Subcommands of the command-line tool."""

    SIMULATE_FULL = "simulate-full"
    SIMULATE_REDUCED = "simulate-reduced"
    FEASIBILITY = "feasibility"
    VALIDATE = "validate"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


class ReducedSection(BaseModel):
    """Options of the reduced polariton run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    method: ReducedMethod = Field(default=ReducedMethod.FOURIER, description="Integrator")
    model: ReducedModel = Field(default=ReducedModel.NONADIABATIC, description="Coefficient set")
    csc_term: CscTermConvention = Field(default=CscTermConvention.PRINTED, description="Reading of the csc^2 term")
    pulse_center: Optional[float] = Field(default=None, description="Initial polariton centre (m)")
    pulse_width: Optional[float] = Field(default=None, gt=0.0, description="Initial 1/e half-width (m)")


class RunConfig(BaseModel):
    """One validated scenario. Every rate is in rad/s once parsed."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: RunMode
    material: Optional[MaterialSpec] = Field(default=None, description="Medium or preset name")
    g2n: Optional[float] = Field(default=None, ge=0.0, description="Collective coupling override ((rad/s)^2)")
    volume: float = Field(default=1e-9, gt=0.0, description="Interaction volume (m^3)")
    drive: Optional[DriveSchedule] = None
    probe: Optional[ProbeSpec] = None
    grid: Optional[SimGrid] = None
    reduced: ReducedSection = Field(default_factory=ReducedSection)
    output: Path = Field(default=Path(settings.output_dir), description="Output directory")
    formats: List[OutputFormat] = Field(default_factory=lambda: [OutputFormat.CSV, OutputFormat.JSON])
    workers: Optional[int] = Field(default=None, ge=1, le=256)

    @field_validator("material", mode="before")
    @classmethod
    def resolve_preset(cls, value: Any) -> Any:
        return _resolve_material(value)

    @field_validator("formats", mode="before")
    @classmethod
    def split_formats(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @model_validator(mode="before")
    @classmethod
    def fill_defaults(cls, data: Any) -> Any:
        """A feasibility run with only a material falls back to the worked storage numbers."""
        if not isinstance(data, dict) or data.get("mode") not in (RunMode.FEASIBILITY, "feasibility"):
            return data
        data = dict(data)
        if "drive" not in data:
            try:
                material = _resolve_material(data.get("material"))
                if isinstance(material, dict):
                    material = MaterialSpec(**material)
            except (ValidationError, DomainError):
                # reported by field validation
                material = None
            if isinstance(material, MaterialSpec) and material.w_product > 0:
                root_w = math.sqrt(material.w_product)
                # broad lines push the ramp start up to the slow-entry boundary
                data["drive"] = {
                    "shape": DriveShape.LINEAR_RAMP.value,
                    "omega0": max(DEFAULT_OMEGA0, DEFAULT_SLOW_ENTRY_FACTOR * root_w),
                    "omega_tau": DEFAULT_FIELD_RATIO * root_w,
                    "t_start": 0.0,
                    "t_end": DEFAULT_RAMP_DURATION,
                }
        data.setdefault("probe", {"duration": DEFAULT_PROBE_DURATION})
        return data

    @model_validator(mode="after")
    def check_sections(self) -> "RunConfig":
        """Each mode needs its own set of sections."""
        required = {
            RunMode.SIMULATE_FULL: ("material", "drive", "probe", "grid"),
            RunMode.SIMULATE_REDUCED: ("material", "drive", "grid"),
            RunMode.FEASIBILITY: ("material", "drive", "probe"),
            RunMode.VALIDATE: (),
        }[self.mode]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"mode {self.mode.value} requires section(s): {', '.join(missing)}")
        return self


def _convert_units(node: Any, path: str = "") -> Any:
    """Strip unit suffixes from rate keys, multiplying Hz values by 2*pi."""
    if isinstance(node, list):
        return [_convert_units(item, f"{path}.{i}" if path else str(i)) for i, item in enumerate(node)]
    if not isinstance(node, dict):
        return node

    out: Dict[str, Any] = {}
    for key, value in node.items():
        key = str(key)
        here = f"{path}.{key}" if path else key
        target, factor = key, None
        if key.endswith(HZ_SUFFIX) and key[: -len(HZ_SUFFIX)] in RATE_KEYS:
            target, factor = key[: -len(HZ_SUFFIX)], TWO_PI
        elif key.endswith(RAD_S_SUFFIX) and key[: -len(RAD_S_SUFFIX)] in RATE_KEYS:
            target, factor = key[: -len(RAD_S_SUFFIX)], 1.0
        elif key.endswith(HZ_SUFFIX) or key.endswith(RAD_S_SUFFIX):
            raise ConfigUnknownKeyError(f"unit suffix on a key that is not a rate: {here}", [here])

        if target in out:
            raise ConfigValidationError(f"{target} given more than once (with different unit suffixes)", [here])
        if factor is None:
            out[target] = _convert_units(value, here)
        elif not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigValidationError(f"{here} must be a number", [here])
        else:
            out[target] = float(value) * factor
    return out


def _key_path(loc: tuple) -> str:
    return ".".join(str(part) for part in loc if not str(part).startswith("function-"))


def _raise_for(error: ValidationError) -> None:
    details = error.errors()
    unknown = [_key_path(e["loc"]) for e in details if e["type"] == "extra_forbidden"]
    if unknown:
        raise ConfigUnknownKeyError(f"unknown key(s): {', '.join(unknown)}", unknown)
    paths = [_key_path(e["loc"]) or "<root>" for e in details]
    lines = [f"{p}: {e['msg']}" for p, e in zip(paths, details)]
    raise ConfigValidationError("; ".join(lines), paths)


def load_config(data: Union[Dict[str, Any], None], mode: Optional[str] = None) -> RunConfig:
    """Validate an already-loaded key tree; `mode` fills in or must match the file's mode."""
    if data is None and mode is not None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigSyntaxError("configuration must be a mapping at the top level")
    if mode is not None:
        if data.get("mode", mode) != mode:
            raise ConfigValidationError(f"configuration is for mode {data['mode']}, not {mode}", ["mode"])
        data = {**data, "mode": mode}
    converted = _convert_units(data)
    try:
        return RunConfig.model_validate(converted)
    except ValidationError as e:
        _raise_for(e)
    except DomainError as e:
        raise ConfigValidationError(str(e), ["material"]) from e


def parse_config(path: Union[str, Path], mode: Optional[str] = None) -> RunConfig:
    """
    Read and validate a YAML run configuration.

    Args:
        path: Configuration file
        mode: Subcommand name; supplies the mode when the file has none

    Returns:
        RunConfig with every rate converted to rad/s

    Raises:
        ConfigFileNotFoundError: The file does not exist
        ConfigSyntaxError: The file is not valid YAML or not a mapping
        ConfigUnknownKeyError: A key is not part of the schema
        ConfigValidationError: A value violates a model invariant
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigFileNotFoundError(f"configuration file not found: {path}", [str(path)])
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.load(f, Loader=ConfigLoader)
    except yaml.YAMLError as e:
        raise ConfigSyntaxError(f"malformed YAML in {path}: {e}") from e

    config = load_config(data, mode)
    logger.info(f"Loaded {config.mode.value} configuration from {path}")
    return config
