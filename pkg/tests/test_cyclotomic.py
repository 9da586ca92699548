# tests/test_cyclotomic.py

from fractions import Fraction

import mpmath as mp
import pytest

from app.core.cyclotomic import (
    I,
    INFINITY,
    ONE,
    ZERO,
    CycNum,
    cross_ratio,
    field_arith,
    get_level_cap,
    set_level_cap,
    sqrt_rational,
    totient,
)
from app.core.errors import DegenerateTuple, DivisionByZero, LevelCapExceeded, NotDivisible
from app.core.geometry import MobiusMap


# ========== ARITHMETIC ==========


def test_roots_of_unity_multiply():
    assert CycNum.mu(6) ** 6 == ONE
    assert CycNum.mu(6) ** 3 == -1
    assert CycNum.mu(4) * CycNum.mu(4) == -1


def test_embedding_is_consistent():
    x = CycNum.mu(3)
    assert x.embed(6) == x
    assert CycNum.mu(6, 2) == CycNum.mu(3)
    with pytest.raises(NotDivisible):
        x.embed(4)


def test_sum_of_all_roots_vanishes():
    total = sum((CycNum.mu(5, k) for k in range(5)), ZERO)
    assert total.is_zero()


def test_mixed_levels_add():
    x = CycNum.mu(3) + CycNum.mu(4)
    expected = complex(mp.expjpi(mp.mpf(2) / 3)) + 1j
    assert abs(complex(x.eval_numeric(20)) - expected) < 1e-15


def test_canonical_level_drops_to_rational():
    # mu_6 + mu_6^5 = 2 cos(pi/3) = 1
    x = CycNum.mu(6) + CycNum.mu(6, 5)
    assert x.is_rational()
    assert x.as_fraction() == 1


def test_inverse_and_division():
    x = ONE + CycNum.mu(5)
    assert x * x.inverse() == ONE
    assert (x / x) == ONE
    with pytest.raises(DivisionByZero):
        ONE / ZERO


def test_conjugation():
    assert I.conj() == -I
    x = CycNum.mu(7, 2) + Fraction(1, 3)
    assert (x * x.conj()).conj() == x * x.conj()


def test_field_arith_dispatch():
    x, y = CycNum.mu(3), CycNum.rational(2)
    assert field_arith(x, y, "add") == x + y
    assert field_arith(x, y, "div") == x / y
    assert field_arith(x, None, "neg") == -x
    with pytest.raises(ValueError):
        field_arith(x, y, "pow")


def test_root_of_unity_detection():
    assert CycNum.mu(12, 4).root_of_unity() == (3, 1)
    assert CycNum.rational(-1).root_of_unity() == (2, 1)
    assert (ONE + I).root_of_unity() is None


def test_numeric_value_of_mu():
    z = CycNum.mu(8).eval_numeric(30)
    with mp.workdps(40):
        assert abs(z - mp.expjpi(mp.mpf(1) / 4)) < mp.mpf(10) ** -28


def test_totient():
    assert [totient(n) for n in (1, 2, 3, 4, 6, 8, 12)] == [1, 1, 2, 2, 2, 4, 4]


# ========== SQUARE ROOTS ==========


@pytest.mark.parametrize("q", [2, 3, 5, Fraction(1, 2), Fraction(5, 4), 12])
def test_sqrt_rational_squares_back(q):
    r = sqrt_rational(q)
    assert r * r == Fraction(q)
    assert r.eval_numeric(20).real > 0


def test_sqrt_negative():
    r = sqrt_rational(-3)
    assert r * r == -3
    assert r.eval_numeric(20).imag > 0


def test_golden_ratio_satisfies_its_polynomial():
    phi = (ONE + sqrt_rational(5)) / 2
    assert phi * phi == phi + 1


# ========== CROSS-RATIO ==========


def test_cross_ratio_with_infinity():
    # infinity factors are dropped
    value = cross_ratio(ZERO, ONE, CycNum.rational(2), INFINITY)
    assert value == 2


def test_cross_ratio_finite():
    z = [CycNum.rational(k) for k in (0, 1, 2, 3)]
    # (2-0)(3-1) / ((2-1)(3-0))
    assert cross_ratio(*z) == Fraction(4, 3)


def test_cross_ratio_rejects_coincident_points():
    with pytest.raises(DegenerateTuple):
        cross_ratio(ZERO, ONE, ONE, INFINITY)


# ========== LEVEL CAP ==========


def test_level_cap():
    old = get_level_cap()
    set_level_cap(10)
    try:
        with pytest.raises(LevelCapExceeded) as exc:
            CycNum.mu(12)
        assert exc.value.exit_code == 3
    finally:
        set_level_cap(old)


def test_cross_ratio_is_mobius_invariant():
    m = MobiusMap.create(1, 2, 3, 5)
    points = [ZERO, ONE, CycNum.rational(2), INFINITY]
    assert cross_ratio(*(m(p) for p in points)) == cross_ratio(*points)
    points = [ZERO, CycNum.mu(4), -ONE, CycNum.mu(4, 3)]
    assert cross_ratio(*(m(p) for p in points)) == cross_ratio(*points)
