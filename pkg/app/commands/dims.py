# app/commands/dims.py

import click

from app.commands.common import check_caps, cli_config, emit
from app.core.relations import dimension_report


@click.command("dims")
@click.option("--level", "level", type=int, required=True, help="Level N.")
@click.option("--weight", "weight", type=int, required=True, help="Weight w.")
@click.option("--generators", default=None, help="Relation families of the cached table to consult.")
@click.pass_context
def dims(ctx, level, weight, generators):
    """Deligne's bound D(w, N) and, when a table is cached, the computed dimension."""
    cfg = cli_config(ctx)
    check_caps(cfg, level, weight)
    names = generators.split(",") if generators else None
    report = dimension_report(level, weight, names, cfg.cache_dir)
    text = f"D({weight},{level}) = {report.deligne_bound}"
    if report.computed is not None:
        text += f", computed {report.computed}"
    emit(report, cfg, text)
