# tests/test_acceptance.py

from fractions import Fraction

import mpmath as mp
import pytest

from app.core.catalog import load_chains, run_regressions
from app.core.convert import convert_binomial, convert_integral, convert_polylog
from app.core.cyclotomic import ONE, ZERO
from app.core.expr import TWOPI, CmzvExpr, cmzv, zeta
from app.core.geometry import level_support
from app.core.numeric import EvalConfig, eval_expr, eval_word_integral
from app.core.parsing import parse_polylog, parse_word
from app.core.relations import build_system, check_rows, deligne_bound, nonstandard_relations
from app.core.words import WordPoly

pytestmark = pytest.mark.slow

SPANNING = ("shuffle", "stuffle", "distribution", "symmetry")


def close(a, b, digits):
    return abs(a - b) < mp.mpf(10) ** -digits


def test_apery(cfg40):
    value = eval_expr(convert_binomial(-1, 3), cfg40)
    with mp.workdps(40):
        assert close(value, -2 * mp.zeta(3) / 5, 25)


@pytest.mark.parametrize(
    "c,n,expected",
    [
        (1, 4, lambda: 17 * mp.pi**4 / 3240),
        (4, 3, lambda: mp.pi**2 * mp.log(2) - 7 * mp.zeta(3) / 2),
        (Fraction(-1, 2), 3, lambda: mp.log(2) ** 3 / 6 - mp.zeta(3) / 4),
    ],
)
def test_central_binomial_sums(cfg, c, n, expected):
    value = eval_expr(convert_binomial(c, n), cfg)
    with mp.workdps(30):
        assert close(value, expected(), 20)


def test_golden_word_integral(cfg):
    word = parse_word("w[0,1,(1+sqrt5)/2]")
    with mp.workdps(30):
        phi = (1 + mp.sqrt(5)) / 2
        expected = (
            2 * mp.pi**2 * mp.log(phi) / 15
            + 2 * mp.log(phi) ** 3 / 3
            - mp.polylog(3, (mp.sqrt(5) - 1) / 2)
            + 2 * mp.zeta(3) / 5
        )
        direct, _ = eval_word_integral(word, cfg)
        assert close(direct, expected, 25)
        assert close(eval_expr(convert_integral(word), cfg), expected, 25)


@pytest.mark.parametrize(
    "level,weight",
    [(1, w) for w in range(2, 7)] + [(2, w) for w in range(2, 5)] + [(3, 2), (3, 3), (4, 2), (4, 3)],
)
def test_dimensions_reach_deligne_bound(cache_dir, level, weight):
    system = build_system(level, weight, SPANNING, cache_dir=cache_dir)
    assert system.dimension == deligne_bound(weight, level)


def test_level_four_weight_three_needs_faces(cache_dir):
    standard = build_system(4, 3, ("shuffle", "stuffle", "distribution"), cache_dir=cache_dir)
    full = build_system(4, 3, SPANNING, cache_dir=cache_dir)
    assert full.dimension == deligne_bound(3, 4) == 8
    assert standard.dimension > full.dimension


def test_level_two_weight_four_reduction(cache_dir, cfg):
    system = build_system(2, 4, SPANNING, cache_dir=cache_dir)
    # Li_{2,1,1}(1, 1, -1) has exponents (0, 0, 1) at level 2
    lhs = cmzv(2, (2, 1, 1), (0, 0, 1))
    reduced = system.reduce(lhs)
    assert system.reduce(reduced) == reduced
    assert set(reduced.atoms()) <= {a for m in system.basis_monomials for a in m}
    with mp.workdps(30):
        assert close(eval_expr(reduced, cfg), eval_expr(lhs, cfg), 25)
    log2 = -cmzv(2, (1,), (1,))
    twopi = CmzvExpr.atom(TWOPI)
    # -Li4(1/2) - 7 zeta(3) log2 / 8 + pi^4 / 80 - log2^4 / 24 - pi^2 log2^2 / 12
    rhs = (
        -convert_polylog(parse_polylog("Li[4](1/2)"))
        - zeta(3) * log2 * Fraction(7, 8)
        + twopi**4 * Fraction(1, 1280)
        - log2**4 * Fraction(1, 24)
        + twopi**2 * log2**2 * Fraction(1, 48)
    )
    assert system.coordinates(lhs) == system.coordinates(rhs)
    assert system.reduce(rhs) == reduced


def test_level_six_weight_three_nonstandard_rows(cfg40):
    pair = next(p for p in load_chains() if p.id == "six-third")
    rows = nonstandard_relations(pair.chain_r, pair.chain_t, 6, 3, cfg40, verify=False)
    assert rows
    assert check_rows(rows, cfg40) == []


def test_level_six_weight_three_word_integrates_to_zero(cfg40):
    pair = next(p for p in load_chains() if p.id == "six-third")
    (r,), (t,) = pair.chain_r, pair.chain_t
    # both chains run from 0 to 1/3, so x0 x0 x1 integrates alike along either
    u = WordPoly.zero()
    for chain, sign in ((r, 1), (t, -1)):
        x0, x1 = (chain.pullback_letter(p, level_support(6)) for p in (ZERO, ONE))
        u = u + (x0 * x0 * x1).scale(sign)
    assert not u.is_zero()
    total = mp.mpc(0)
    for w, c in u:
        value, _ = eval_word_integral(w, cfg40)
        total += c.eval_numeric(cfg40.dps) * value
    assert abs(total) < mp.mpf(10) ** -25


def test_shipped_identity_suite():
    report = run_regressions(cfg=EvalConfig.from_settings(digits=30))
    assert [r.id for r in report.failures] == []
    assert report.summary()["passed"] == report.summary()["theorems"]
