# app/config.py

from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Literal

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Toolkit settings, read from CMZV_* environment variables or a .env file."""

    model_config = SettingsConfigDict(env_prefix="CMZV_", env_file=".env", extra="ignore")

    digits: int = Field(default=30, ge=10)
    guard_digits: int = Field(default=10, ge=0)
    max_terms: int = Field(default=200000, ge=1000)
    max_weight: int = Field(default=5, ge=1, le=8)
    max_level: int = Field(default=12, ge=1)
    field_level_cap: int = Field(default=240, ge=1)
    detour_radius: str = Field(default="1/8")
    quadrature_order: int = Field(default=64, ge=8, le=128)
    cache_dir: Path = Field(default=Path("cache"))
    output_format: Literal["json", "text"] = "json"
    log_level: str = "INFO"

    @field_validator("detour_radius")
    @classmethod
    def validate_radius(cls, v):
        """Ensure the detour radius is a rational in [0, 1/2)."""
        try:
            r = Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"CMZV_DETOUR_RADIUS is not a rational number: {v!r}") from exc
        if not 0 <= r < Fraction(1, 2):
            raise ValueError("CMZV_DETOUR_RADIUS must lie in [0, 1/2)")
        return str(r)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        """Normalize the log level name."""
        v = v.upper()
        if v not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
            raise ValueError(f"CMZV_LOG_LEVEL is not a logging level: {v!r}")
        return v


@lru_cache
def get_settings() -> Settings:
    return Settings()
