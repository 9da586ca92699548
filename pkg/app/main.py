# app/main.py

import json
import logging
from pathlib import Path

import click

from app.commands import convert, dims, evaluate, export, relations, verify
from app.config import get_settings
from app.core.cyclotomic import set_level_cap
from app.core.errors import CmzvError

logger = logging.getLogger(__name__)


class CmzvGroup(click.Group):
    """Turns toolkit errors into an error JSON object and the matching exit code."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CmzvError as e:
            logger.error(f"❌ {type(e).__name__}: {e}")
            payload = {"error": type(e).__name__, "detail": str(e)}
            if e.detail:
                payload["context"] = {k: v if isinstance(v, (int, float, str, list, type(None))) else str(v) for k, v in e.detail.items()}
            click.echo(json.dumps(payload, default=str), err=False)
            ctx.exit(e.exit_code)


@click.group(cls=CmzvGroup)
@click.option("--digits", type=click.IntRange(min=10), default=None, help="Working precision in decimal digits.")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None, envvar="CMZV_CACHE_DIR")
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default=None)
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR.")
@click.version_option("1.0.0", prog_name="cmzv")
@click.pass_context
def cli(ctx, digits, cache_dir, output_format, log_level):
    """Colored multiple zeta values: evaluation, conversion, relations and identity checks."""
    settings = get_settings()
    logging.basicConfig(level=(log_level or settings.log_level).upper())
    set_level_cap(settings.field_level_cap)
    ctx.obj = {k: v for k, v in {"digits": digits, "cache_dir": cache_dir, "output_format": output_format}.items() if v is not None}
    logger.debug(f"🚀 cmzv {ctx.invoked_subcommand} with {ctx.obj}")


cli.add_command(dims.dims)
cli.add_command(evaluate.evaluate)
cli.add_command(convert.convert)
cli.add_command(relations.relations)
cli.add_command(verify.verify)
cli.add_command(export.export)


def main():
    cli()


if __name__ == "__main__":
    main()
