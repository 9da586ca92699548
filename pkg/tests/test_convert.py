# tests/test_convert.py

from fractions import Fraction

import mpmath as mp
import pytest

from app.core.catalog import load_catalog
from app.core.convert import (
    binomial_alpha,
    binomial_sum_word,
    convert_binomial,
    convert_expr,
    convert_integral,
    convert_polylog,
    convert_word,
    find_entry,
    index_to_word,
    make_plan,
    normalize_weight_one,
    plan_chain,
    plan_for_entry,
    round_twopi,
    solve_corner_constants,
    word_to_index,
)
from app.core.cyclotomic import INFINITY, ONE, ZERO, CycNum, sqrt_rational
from app.core.errors import (
    AlphaNotCyclotomic,
    ConvergenceDomain,
    Divergent,
    DivergentWord,
    NoCatalogEntry,
    NonUnitaryPole,
    NotConvergentWord,
    RoundingAmbiguous,
    UnsupportedPole,
)
from app.core.expr import TWOPI, CmzvExpr, CmzvIndex, PolylogIndex, cmzv, zeta
from app.core.geometry import MobiusMap, level_support
from app.core.numeric import eval_expr, eval_word_integral
from app.core.parsing import parse_expression, parse_polylog
from app.core.relations import convergent_words
from app.core.words import WordPoly, make_word

HALF = CycNum.rational(Fraction(1, 2))


def close(a, b, digits=25):
    return abs(mp.mpc(a) - mp.mpc(b)) < mp.mpf(10) ** -digits


def entry(entry_id):
    return next(e for e in load_catalog() if e.id == entry_id)


# ========== WORDS AND INDICES ==========


def test_word_to_index_zeta_two():
    assert word_to_index(make_word(0, 1)) == (-1, CmzvIndex(1, (2,), (0,)))


def test_index_word_correspondence():
    idx = CmzvIndex(2, (1, 1), (1, 1))
    sign, w = index_to_word(idx.to_polylog())
    assert w == make_word(-1, 1)
    assert word_to_index(w) == (sign, idx)


def test_word_to_index_rejects():
    with pytest.raises(NotConvergentWord):
        word_to_index(make_word(1, -1))
    with pytest.raises(NonUnitaryPole):
        word_to_index(make_word(0, 2))


def test_index_to_word_domain():
    with pytest.raises(Divergent):
        index_to_word(PolylogIndex((1,), (ONE,)))
    with pytest.raises(Divergent):
        index_to_word(PolylogIndex((2,), (CycNum.rational(2),)))


def test_normalize_weight_one(cfg):
    e = cmzv(3, (1,), (2,))
    normalized = normalize_weight_one(e)
    assert normalized == cmzv(3, (1,), (1,)) - CmzvExpr.atom(TWOPI, Fraction(1, 6))
    assert close(eval_expr(e, cfg), eval_expr(normalized, cfg))


def test_round_twopi():
    assert round_twopi(mp.mpc(0, mp.pi) / 3, 12) == Fraction(1, 6)
    with pytest.raises(RoundingAmbiguous):
        round_twopi(mp.mpc(1, 0), 12)


# ========== PLANS ==========


def test_plan_chain_on_level_one():
    steps = plan_chain(level_support(1), ZERO, ONE)
    assert len(steps) == 1
    assert steps[0].source == ZERO and steps[0].target == ONE


def test_plan_reaches_infinity():
    steps = plan_chain(level_support(2), ZERO, INFINITY)
    assert steps[0].source == ZERO
    assert steps[-1].target is INFINITY


def test_identity_plan_has_trivial_corners():
    plan = plan_for_entry(entry("anharmonic-2-invert"))
    assert plan.solved
    assert plan.start == INFINITY and plan.end == ZERO
    assert HALF in plan.image


def test_make_plan_describe():
    plan = make_plan(2, MobiusMap.create(-1, 1, 0, 1), entry_id="reflect")
    info = plan.describe()
    assert info["entry"] == "reflect"
    assert info["chain"][0] == "1 -> 0"


def test_golden_plan_corner_constants(cfg):
    plan = plan_for_entry(entry("golden-5"))
    mu = CycNum.mu(5)
    assert plan.vertices == [mu, ZERO, ONE]
    at_mu, at_zero, _ = plan.constants
    assert at_zero == CmzvExpr.atom(TWOPI, Fraction(-1, 5))
    with mp.workdps(cfg.dps):
        phi = (1 + mp.sqrt(5)) / 2
        expected = 3 * mp.log(phi) / 2 - mp.mpc(0, mp.pi) / 2 - mp.log(5) / 4
        assert close(eval_expr(at_mu, cfg), expected)


def test_conversion_does_not_depend_on_the_chain(cfg):
    straight = solve_corner_constants(make_plan(1, MobiusMap.identity()))
    around = solve_corner_constants(make_plan(1, MobiusMap.identity(), via=INFINITY))
    assert len(straight.steps) == 1 and len(around.steps) == 2
    for w in convergent_words(1, 4):
        expected, _ = eval_word_integral(w, cfg)
        assert close(eval_expr(convert_word(straight, w), cfg), expected)
        assert close(eval_expr(convert_word(around, w), cfg), expected)


def test_find_entry():
    assert find_entry([HALF, ZERO]).level == 2
    with pytest.raises(NoCatalogEntry):
        find_entry([CycNum.rational(Fraction(1, 7))])


# ========== CONVERSION ==========


def test_unitary_words_take_fast_path():
    assert convert_integral(make_word(0, 1)) == -zeta(2)
    assert convert_integral(WordPoly.one()) == CmzvExpr.one()


def test_dilogarithm_at_half(cfg):
    value = convert_polylog(parse_polylog("Li[2](1/2)"))
    assert value.is_cmzv()
    assert value.level() == 2
    assert close(eval_expr(value, cfg), mp.polylog(2, mp.mpf(1) / 2))


def test_trilogarithm_at_half(cfg):
    value = convert_polylog(parse_polylog("Li[3](1/2)"))
    assert close(eval_expr(value, cfg), mp.polylog(3, mp.mpf(1) / 2))


def test_depth_two_at_half(cfg):
    value = convert_polylog(PolylogIndex((1, 1), (HALF, CycNum.rational(2))))
    # poles 2 and 1; the word is convergent, so direct integration applies
    expected, _ = eval_word_integral(make_word(2, 1), cfg)
    assert close(eval_expr(value, cfg), expected)


def test_golden_ratio_dilogarithm(cfg):
    rho = (sqrt_rational(5) - 1) / 2
    value = convert_polylog(PolylogIndex((2,), (rho,)))
    assert value.is_cmzv()
    with mp.workdps(cfg.dps):
        assert close(eval_expr(value, cfg), mp.pi**2 / 10 - mp.log(rho.eval_numeric(cfg.dps).real) ** 2)


def test_watson_dilogarithms_at_level_seven(cfg):
    value = convert_expr(parse_expression("Li[2](1/(mu(7)+mu(7)^6)) - Li[2](1/(mu(7)+mu(7)^6)^2)"))
    assert value.is_cmzv()
    assert value.level() == 7
    with mp.workdps(cfg.dps):
        x = 1 / (2 * mp.cos(2 * mp.pi / 7))
        assert close(eval_expr(value, cfg), mp.polylog(2, x) - mp.polylog(2, x**2))
        assert close(eval_expr(value, cfg), mp.pi**2 / 42 + mp.log(x) ** 2)


def test_word_outside_image():
    plan = plan_for_entry(entry("anharmonic-2-invert"))
    with pytest.raises(UnsupportedPole):
        convert_word(plan, make_word(0, CycNum.rational(3)))
    with pytest.raises(DivergentWord):
        convert_word(plan, make_word(HALF, 0))


# ========== CENTRAL BINOMIAL SUMS ==========


def test_binomial_alpha():
    assert binomial_alpha(4) == HALF
    # c = 1: alpha = (1 - sqrt(-3)) / 2
    assert binomial_alpha(1) == (ONE - sqrt_rational(-3)) / 2
    with pytest.raises(ConvergenceDomain):
        binomial_alpha(5)


def test_binomial_alpha_for_quadratic_c():
    sqrt5 = sqrt_rational(5)
    # c = 2 - sqrt5: alpha = -(1 + sqrt5) / 2 and 1 - alpha = (3 + sqrt5) / 2
    alpha = binomial_alpha(2 - sqrt5)
    assert alpha == -(ONE + sqrt5) / 2
    assert (2 - sqrt5) * alpha * (ONE - alpha) == ONE
    with pytest.raises(ConvergenceDomain):
        binomial_alpha(3 + sqrt5)
    with pytest.raises(AlphaNotCyclotomic):
        binomial_alpha(CycNum.mu(5))


def test_binomial_word_shape():
    sign, poly = binomial_sum_word(1, 2)
    assert sign == -1
    assert poly.max_weight() == 2
    with pytest.raises(ConvergenceDomain):
        binomial_sum_word(1, 1)


def test_binomial_conversion(cfg):
    value = convert_binomial(1, 2)
    assert close(eval_expr(value, cfg), mp.pi**2 / 18)


def test_binomial_conversion_for_quadratic_c(cfg):
    c = 2 - sqrt_rational(5)
    value = convert_binomial(c, 2)
    assert value.is_cmzv()
    with mp.workdps(cfg.dps):
        # sum (2x)^(2k) / (k^2 binom(2k, k)) = 2 arcsin(x)^2 with x = i sqrt(sqrt5 - 2) / 2
        expected = -2 * mp.asinh(mp.sqrt(mp.sqrt(5) - 2) / 2) ** 2
        assert close(eval_expr(value, cfg), expected)


def test_binomial_at_four(cfg):
    value = convert_binomial(4, 2)
    assert close(eval_expr(value, cfg), mp.pi**2 / 2)
    with pytest.raises(ConvergenceDomain):
        convert_binomial(4, 2, (1,))
