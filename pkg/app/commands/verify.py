# app/commands/verify.py

import logging
from pathlib import Path

import click

from app.commands.common import cli_config, emit
from app.core.catalog import load_identities, run_regressions
from app.core.numeric import EvalConfig

logger = logging.getLogger(__name__)


@click.command("verify")
@click.option("--suite", type=click.Choice(["paper"]), default=None, help="The shipped identity suite.")
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--digits", type=click.IntRange(min=10), default=None)
@click.pass_context
def verify(ctx, suite, path, digits):
    """Run an identity suite; exits 1 when a theorem record fails."""
    if (suite is None) == (path is None):
        raise click.UsageError("give exactly one of --suite, --file")
    cfg = cli_config(ctx, digits=digits)
    records = load_identities(path)
    report = run_regressions(records, EvalConfig.from_settings(digits=cfg.digits))
    lines = [f"{r.id}: {'ok' if r.passed else 'FAIL' if r.status == 'theorem' else 'watch'} {r.residual}" for r in report.results]
    emit({"summary": report.summary(), **report.model_dump(mode="json")}, cfg, "\n".join(lines))
    if not report.ok:
        logger.warning(f"{len(report.failures)} theorem records failed")
        ctx.exit(1)
