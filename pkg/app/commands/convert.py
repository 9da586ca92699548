# app/commands/convert.py

import click
import mpmath as mp

from app.commands.common import cli_config, emit
from app.core.convert import convert_binomial, convert_expr, convert_polylog
from app.core.expr import BinomAtom, CmzvExpr, PolylogAtom
from app.core.numeric import EvalConfig, eval_expr
from app.core.parsing import parse_binom, parse_expression, parse_polylog
from app.schemas.expr import ConversionResult, ExprSchema


@click.command("convert")
@click.option("--polylog", "polylog", default=None, help='Polylogarithm, e.g. "Li[2]((sqrt5-1)/2)".')
@click.option("--binom", "binom", default=None, help='Central binomial sum "c,n,t1;t2;...".')
@click.option("--expr", "expr", default=None, help="Expression whose polylog and binom atoms are converted.")
@click.option("--level", type=int, default=None, help="Restrict the catalog to entries of this level.")
@click.option("--check/--no-check", default=False, help="Report the numeric residual against the input.")
@click.pass_context
def convert(ctx, polylog, binom, expr, level, check):
    """Rewrite a polylogarithm or binomial sum as a colored MZV expression."""
    given = [v for v in (polylog, binom, expr) if v is not None]
    if len(given) != 1:
        raise click.UsageError("give exactly one of --polylog, --binom, --expr")
    cfg = cli_config(ctx)
    if polylog is not None:
        p = parse_polylog(polylog)
        source = CmzvExpr.atom(PolylogAtom(p))
        result = convert_polylog(p, level=level)
    elif binom is not None:
        c, n, twist = parse_binom(binom)
        source = CmzvExpr.atom(BinomAtom(c, n, twist))
        result = convert_binomial(c, n, twist, level=level)
    else:
        source = parse_expression(expr)
        result = convert_expr(source)
    residual = None
    if check:
        value = eval_expr(source - result, EvalConfig.from_settings(digits=cfg.digits))
        residual = mp.nstr(abs(value), 3)
    out = ConversionResult(
        input=given[0],
        expr=ExprSchema.model_validate(result.to_json()),
        text=result.to_text(),
        residual=residual,
    )
    emit(out, cfg, out.text if residual is None else f"{out.text}\nresidual {residual}")
