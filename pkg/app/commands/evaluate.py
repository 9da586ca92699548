# app/commands/evaluate.py

import logging

import click
import mpmath as mp

from app.commands.common import cli_config, emit
from app.core.expr import CmzvExpr
from app.core.numeric import EvalConfig, eval_expr, eval_word_integral
from app.core.parsing import parse_expression, parse_index, parse_word
from app.schemas.expr import EvalResult

logger = logging.getLogger(__name__)


def _value(source: str, kind: str, cfg: EvalConfig):
    if kind == "word":
        return eval_word_integral(parse_word(source), cfg)[0]
    e = CmzvExpr.atom(parse_index(source)) if kind == "index" else parse_expression(source)
    return eval_expr(e, cfg)


@click.command("eval")
@click.option("--index", "index", default=None, help='Colored MZV, e.g. "L[2;0]@1".')
@click.option("--word", "word", default=None, help='Iterated integral over [0, 1], e.g. "w[0,1,(1+sqrt5)/2]".')
@click.option("--expr", "expr", default=None, help="Any expression in the identity syntax.")
@click.option("--digits", type=click.IntRange(min=10), default=None)
@click.pass_context
def evaluate(ctx, index, word, expr, digits):
    """Evaluate to the requested number of digits; the error estimate compares two precisions."""
    given = [(k, v) for k, v in (("index", index), ("word", word), ("expr", expr)) if v is not None]
    if len(given) != 1:
        raise click.UsageError("give exactly one of --index, --word, --expr")
    kind, source = given[0]
    cfg = cli_config(ctx, digits=digits)
    ecfg = EvalConfig.from_settings(digits=cfg.digits)
    value = _value(source, kind, ecfg)
    check = _value(source, kind, EvalConfig.from_settings(digits=cfg.digits + 10))
    with mp.workdps(cfg.digits + 10):
        error = abs(value - check)
    result = EvalResult(
        input=source,
        digits=cfg.digits,
        value_re=mp.nstr(mp.re(value), cfg.digits),
        value_im=mp.nstr(mp.im(value), cfg.digits),
        est_error=mp.nstr(error, 3),
    )
    emit(result, cfg, f"{result.value_re} + {result.value_im}*i  (+/- {result.est_error})")
