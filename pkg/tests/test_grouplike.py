# tests/test_grouplike.py

import mpmath as mp
import pytest

from app.core.cyclotomic import CycNum
from app.core.errors import AlphabetMismatch, ModeMismatch, NonInjectiveMap, NotGroupLike
from app.core.expr import CmzvExpr, zeta
from app.core.grouplike import (
    NUMERIC,
    SYMBOLIC,
    exp_letter,
    explicit,
    hom_map,
    is_grouplike,
    regularized_lift,
    series_inverse,
    series_mul,
    series_product,
    substitute,
    unit,
)
from app.core.numeric import eval_word_integral
from app.core.words import WordPoly, letter, make_word

X0, X1 = letter(0), letter(1)
ALPHABET = {X0, X1}


def test_exp_letter_coefficients():
    g = exp_letter(zeta(2), X0, ALPHABET, 3)
    assert g[(X0, X0)] == zeta(2) ** 2 / 2
    assert g[(X0, X1)].is_zero()
    assert g[()] == CmzvExpr.one()


def test_exp_letter_is_grouplike():
    ok, witness = is_grouplike(exp_letter(zeta(2), [X0, X1], ALPHABET, 3))
    assert ok and witness is None


def test_product_with_inverse_is_unit():
    g = series_mul(exp_letter(zeta(2), X0, ALPHABET, 3), exp_letter(zeta(3), X1, ALPHABET, 3))
    h = series_mul(g, series_inverse(g))
    for w in h.words():
        if w:
            assert h[w].is_zero()


def test_product_concatenates():
    a = exp_letter(zeta(2), X0, ALPHABET, 2)
    b = exp_letter(zeta(3), X1, ALPHABET, 2)
    assert series_product(a, b)[(X0, X1)] == zeta(2) * zeta(3)
    assert series_product(a, b)[(X1, X0)].is_zero()


def test_explicit_series_is_checked():
    g = explicit(ALPHABET, 2, {(X0,): CmzvExpr.one()})
    ok, witness = is_grouplike(g)
    assert not ok
    with pytest.raises(NotGroupLike):
        series_inverse(g)


def test_incompatible_series():
    with pytest.raises(ModeMismatch):
        series_mul(unit(ALPHABET, 2), unit(ALPHABET, 2, NUMERIC))
    with pytest.raises(AlphabetMismatch):
        series_mul(unit(ALPHABET, 2), unit(ALPHABET, 3))


def test_hom_map_relabels():
    g = exp_letter(zeta(2), X0, ALPHABET, 2)
    y = letter(-1)
    h = hom_map(g, {X0: y, X1: X1})
    assert h[(y,)] == zeta(2)
    with pytest.raises(NonInjectiveMap):
        hom_map(g, {X0: X1, X1: X1})


def test_substitute_scales_letter():
    g = exp_letter(zeta(2), X0, ALPHABET, 2)
    h = substitute(g, lambda x: WordPoly.letter(x.pole, 2), ALPHABET)
    assert h[(X0,)] == zeta(2) * 2
    assert h[(X0, X0)] == zeta(2) ** 2 * 2


def test_regularized_lift_shuffle_rule():
    table = {make_word(0, 1): mp.mpc(3)}

    def j(w):
        return table.get(w, mp.mpc(0))

    g = regularized_lift(j, X1, X0, ALPHABET, 2, mode=NUMERIC)
    assert g[(X1,)] == 0
    assert g[(X1, X0)] == -3
    assert g[(X0, X1)] == 3


def test_dump_lists_nonzero_coefficients():
    dump = exp_letter(mp.mpc(1), X0, ALPHABET, 2, mode=NUMERIC).dump()
    assert dump["W"] == 2
    assert dump["mode"] == NUMERIC
    assert set(dump["coeffs"]) == {"w[]", "w[0]", "w[0,0]"}
    assert unit(ALPHABET, 2).dump()["mode"] == SYMBOLIC


def test_regularized_lift_of_integrals_is_grouplike(low_cfg):
    def j(w):
        return eval_word_integral(w, low_cfg)[0]

    g = regularized_lift(j, X1, X0, ALPHABET, 3, mode=NUMERIC)
    ok, witness = is_grouplike(g, tol=mp.mpf(10) ** -12)
    assert ok, witness
    assert abs(g[(X0, X1)] + mp.zeta(2)) < mp.mpf(10) ** -12


def test_regularized_lift_recovers_a_symbolic_series():
    xi = letter(CycNum.mu(4))
    alphabet = {X0, X1, xi}
    # commutator factors leave the linear coefficients of X0 and X1 at zero
    g = series_product(
        exp_letter(zeta(2), xi, alphabet, 4),
        exp_letter(zeta(3), X0, alphabet, 4),
        exp_letter(zeta(5), X1, alphabet, 4),
        exp_letter(zeta(3) * -1, X0, alphabet, 4),
        exp_letter(zeta(5) * -1, X1, alphabet, 4),
    )
    assert g[(X0,)].is_zero() and g[(X1,)].is_zero()
    assert not g[(X0, X1)].is_zero()
    lift = regularized_lift(lambda w: g[w], X1, X0, alphabet, 4)
    for w in g.words():
        assert (lift[w] - g[w]).is_zero(), w
    ok, witness = is_grouplike(lift)
    assert ok, witness
