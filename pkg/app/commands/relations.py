# app/commands/relations.py

import logging
from pathlib import Path

import click

from app.commands.common import check_caps, cli_config, emit
from app.core.relations import DEFAULT_GENERATORS, build_system, check_generators

logger = logging.getLogger(__name__)


@click.command("relations")
@click.option("--level", type=int, required=True)
@click.option("--weight", type=int, required=True)
@click.option("--generators", default=",".join(DEFAULT_GENERATORS), show_default=True)
@click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the table here.")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--no-cache", is_flag=True, default=False)
@click.pass_context
def relations(ctx, level, weight, generators, out, cache_dir, no_cache):
    """Build the relation table of level N and weight w."""
    cfg = cli_config(ctx, cache_dir=cache_dir)
    check_caps(cfg, level, weight)
    names = check_generators(generators.split(","))
    system = build_system(level, weight, names, cache_dir=cfg.cache_dir, use_cache=not no_cache)
    table = system.to_table()
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(table.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"relation table written to {out}")
    summary = {
        "level": level,
        "weight": weight,
        "generators": list(names),
        "monomials": len(table.monomials),
        "rank": system.rank,
        "basis": [table.monomials[c] for c in table.basis],
        "dimension": table.dimension,
        "deligne_bound": table.deligne_bound,
        "out": str(out) if out is not None else None,
    }
    emit(summary, cfg, f"N={level} w={weight}: dimension {table.dimension}, bound {table.deligne_bound}")
