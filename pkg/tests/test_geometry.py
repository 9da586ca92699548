# tests/test_geometry.py

import pytest

from app.core.cyclotomic import INFINITY, ONE, ZERO, CycNum
from app.core.errors import ConstantResult, DegenerateTriple, DoesNotSplit
from app.core.geometry import (
    MobiusMap,
    RationalMap,
    check_closed,
    complete_edges,
    image_support,
    invariant_map,
    is_unital,
    level_support,
    mobius_from_triple,
    symmetry_group,
)
from app.core.words import WordPoly

SQUARE = RationalMap.create((0, 0, 1), (1,))
TWO = CycNum.rational(2)


# ========== MOBIUS ==========


def test_mobius_from_triple():
    m = mobius_from_triple([ZERO, ONE, INFINITY], [ONE, ZERO, INFINITY])
    assert m(TWO) == -1
    assert m(INFINITY) is INFINITY


def test_mobius_inverse_and_compose():
    m = MobiusMap.create(1, 2, 3, 5)
    z = CycNum.mu(3)
    assert m.inverse()(m(z)) == z
    assert m.compose(m.inverse()) == MobiusMap.identity()


def test_mobius_pole_maps_to_infinity():
    m = MobiusMap.create(1, 0, 1, -1)
    assert m(ONE) is INFINITY
    assert m(INFINITY) == 1


def test_degenerate_triple():
    with pytest.raises(DegenerateTriple):
        mobius_from_triple([ZERO, ZERO, ONE], [ZERO, ONE, INFINITY])
    with pytest.raises(DegenerateTriple):
        MobiusMap.create(1, 1, 1, 1)


# ========== RATIONAL MAPS ==========


def test_square_map_values():
    assert SQUARE(CycNum.mu(4)) == -1
    assert SQUARE(INFINITY) is INFINITY
    assert SQUARE.degree == 2


def test_preimages_with_multiplicity():
    assert SQUARE.preimage_multiset(ZERO, level_support(2)) == [ZERO, ZERO]
    assert SQUARE.preimage_multiset(INFINITY, level_support(2)) == [INFINITY, INFINITY]
    with pytest.raises(DoesNotSplit):
        SQUARE.preimage_multiset(ONE, level_support(1))


def test_pullback_of_letter():
    assert SQUARE.pullback_letter(ONE, level_support(2)) == WordPoly.letter(1) + WordPoly.letter(-1)
    assert SQUARE.pullback_letter(ZERO, level_support(2)) == WordPoly.letter(0, 2)
    assert SQUARE.pullback_letter(INFINITY, level_support(2)).is_zero()


def test_constant_map_rejected():
    with pytest.raises(ConstantResult):
        RationalMap.create((2,), (1,))
    with pytest.raises(ConstantResult):
        RationalMap.create((0, 1), (0, 1))


def test_from_divisor_normalization():
    # z / (z - 1)^2 normalized to be 1 at -1
    r = RationalMap.from_divisor([(ZERO, 1)], [(ONE, 2)], one_at=CycNum.rational(-1))
    assert r(CycNum.rational(-1)) == 1
    assert r(ZERO) == 0
    assert r(ONE) is INFINITY


def test_precompose_with_mobius():
    flip = MobiusMap.create(-1, 1, 0, 1)  # 1 - z
    r = SQUARE.precompose_mobius(flip)
    assert r(TWO) == 1
    assert r(ZERO) == 1


# ========== SUPPORTS ==========


def test_level_support():
    pts = level_support(4)
    assert len(pts) == 6
    assert CycNum.mu(4) in pts and INFINITY in pts


def test_closed_supports():
    assert check_closed(SQUARE, level_support(2))
    assert check_closed(SQUARE, level_support(4))
    assert not check_closed(SQUARE, level_support(1))
    assert image_support(SQUARE, level_support(4))[-1] is INFINITY


def test_symmetry_group_orders():
    assert len(symmetry_group(level_support(1))) == 6
    assert len(symmetry_group(level_support(2))) == 8


def test_unital_maps():
    assert is_unital(SQUARE, 2)
    assert not is_unital(SQUARE, 1)
    assert is_unital(MobiusMap.create(-1, 1, 0, 1), 1)


def test_complete_edges():
    assert complete_edges(level_support(1), [(ZERO, ONE)])
    assert not complete_edges(level_support(1), [])


def test_invariant_map():
    group = [MobiusMap.identity(), MobiusMap.create(0, 1, 1, 0)]
    r = invariant_map(group, MobiusMap.identity())
    assert r(ONE) == 2
    with pytest.raises(ConstantResult):
        invariant_map([MobiusMap.identity(), MobiusMap.create(-1, 1, 0, 1)], MobiusMap.identity())


def test_pullback_is_functorial():
    support = level_support(2)
    group = symmetry_group(support)
    for m1 in group[:3]:
        for m2 in group[-3:]:
            composed = m2.compose(m1).to_rational()
            for a in support:
                step = WordPoly.zero()
                for w, c in m2.to_rational().pullback_letter(a, support):
                    step = step + m1.to_rational().pullback_letter(w[0].pole, support).scale(c)
                assert composed.pullback_letter(a, support) == step
