# app/commands/export.py

import logging
from pathlib import Path

import click

from app.commands.common import check_caps, cli_config
from app.core.catalog import load_identities, run_regressions
from app.core.numeric import EvalConfig
from app.core.relations import DEFAULT_GENERATORS, build_system, check_generators
from app.utils.export import generate_regressions_xlsx, generate_relations_xlsx

logger = logging.getLogger(__name__)


@click.command("export")
@click.option("--what", type=click.Choice(["relations", "regressions"]), required=True)
@click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--level", type=int, default=None)
@click.option("--weight", type=int, default=None)
@click.option("--generators", default=",".join(DEFAULT_GENERATORS))
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--digits", type=click.IntRange(min=10), default=None)
@click.pass_context
def export(ctx, what, out, level, weight, generators, path, digits):
    """Write a relation table or a regression report as an xlsx workbook."""
    cfg = cli_config(ctx, digits=digits)
    if what == "relations":
        if level is None or weight is None:
            raise click.UsageError("relations export needs --level and --weight")
        check_caps(cfg, level, weight)
        system = build_system(level, weight, check_generators(generators.split(",")), cache_dir=cfg.cache_dir)
        data = generate_relations_xlsx(system.to_table())
    else:
        report = run_regressions(load_identities(path), EvalConfig.from_settings(digits=cfg.digits))
        data = generate_regressions_xlsx(report)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(data.getvalue())
    logger.info(f"{what} exported to {out}")
    click.echo(str(out))
