"""Simulator settings with validation."""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with validation."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="POLARITON_",
        case_sensitive=False,
        extra="ignore",
    )

    # Compute
    workers: int = Field(
        default=1,
        ge=1,
        le=256,
        description="Maximum number of threads used for ensemble updates",
    )
    output_dir: str = Field(default="results", description="Default output directory")

    # Thresholds for inequalities the physics states only qualitatively
    much_greater_ratio: float = Field(
        default=100.0,
        ge=1.0,
        le=1e6,
        description="Ratio used to decide a >> b",
    )
    weak_probe_threshold: float = Field(
        default=1e-2,
        gt=0.0,
        le=1.0,
        description="Largest g*E/Omega still treated as a weak probe",
    )
    min_broadening_ratio: float = Field(
        default=10.0,
        ge=1.0,
        description="Smallest W13/W12 accepted by the reduced polariton model",
    )
    warn_broadening_ratio: float = Field(
        default=100.0,
        ge=1.0,
        description="W13/W12 below which a warning is logged",
    )
    decay_to_width_warning: float = Field(
        default=0.1,
        gt=0.0,
        le=1.0,
        description="gamma/W ratio above which averaged closed forms warn",
    )

    # Output
    schema_version: str = Field(default="1.0", description="Version of the CSV/JSON output schema")

    # Runtime
    environment: str = Field(default="development", description="Environment (development/production)")
    debug: bool = Field(default=False, description="Debug mode")
    log_level: str = Field(default="INFO", description="Logging level")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Invalid log level: {v}. Must be one of {valid_levels}")
        return v.upper()

    @field_validator("schema_version")
    @classmethod
    def validate_schema_version(cls, v: str) -> str:
        """Schema versions are dotted integers."""
        parts = v.split(".")
        if not all(p.isdigit() for p in parts):
            raise ValueError(f"Invalid schema version: {v}. Expected format: 1.0")
        return v

    @property
    def is_production(self) -> bool:
        """Check if running in production."""
        return self.environment.lower() == "production"

    def validate_all(self) -> None:
        """Validate cross-field settings on startup."""
        if self.warn_broadening_ratio < self.min_broadening_ratio:
            raise ValueError(
                "warn_broadening_ratio must not be smaller than min_broadening_ratio"
            )
        if self.is_production and self.debug:
            raise ValueError("Debug mode must be disabled in production")


# Global settings instance
settings = Settings()

# Validate settings on import
try:
    settings.validate_all()
except ValueError as e:
    import warnings

    warnings.warn(f"Settings validation warning: {e}")
