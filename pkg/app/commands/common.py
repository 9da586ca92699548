# app/commands/common.py

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path

import click
from pydantic import BaseModel

from app.config import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CliConfig:
    digits: int = 30
    cache_dir: Path = Path("cache")
    max_weight: int = 5
    max_level: int = 12
    output_format: str = "json"

    @classmethod
    def from_settings(cls, **overrides) -> "CliConfig":
        settings = get_settings()
        base = cls(
            digits=settings.digits,
            cache_dir=settings.cache_dir,
            max_weight=settings.max_weight,
            max_level=settings.max_level,
            output_format=settings.output_format,
        )
        return replace(base, **{k: v for k, v in overrides.items() if v is not None})


def cli_config(ctx: click.Context, **overrides) -> CliConfig:
    """Settings overridden by the group options, then by the command's own flags."""
    group = ctx.find_root().obj or {}
    merged = {**group, **{k: v for k, v in overrides.items() if v is not None}}
    return CliConfig.from_settings(**merged)


def check_caps(cfg: CliConfig, level: int | None = None, weight: int | None = None) -> None:
    if level is not None and not 1 <= level <= cfg.max_level:
        raise click.BadParameter(f"level must lie in [1, {cfg.max_level}]", param_hint="--level")
    if weight is not None and not 1 <= weight <= cfg.max_weight:
        raise click.BadParameter(f"weight must lie in [1, {cfg.max_weight}]", param_hint="--weight")


def emit(payload, cfg: CliConfig, text: str | None = None) -> None:
    """Print a model or dict as JSON, or the text rendering when the text format is chosen."""
    if cfg.output_format == "text" and text is not None:
        click.echo(text)
        return
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    click.echo(json.dumps(data, indent=2))
