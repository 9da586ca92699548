# tests/test_linalg.py

from fractions import Fraction

from app.core.cyclotomic import CycNum
from app.core.linalg import SparseEchelon


def test_rank_and_basis():
    e = SparseEchelon()
    assert e.add_row({0: Fraction(1), 2: Fraction(-1)})
    assert e.add_row({1: Fraction(2), 2: Fraction(2)})
    assert not e.add_row({0: Fraction(1), 1: Fraction(1)})
    assert e.rank == 2
    assert e.pivots == {2, 1}
    assert e.basis(3) == [0]


def test_rows_stay_fully_reduced():
    e = SparseEchelon()
    e.add_row({2: Fraction(1), 1: Fraction(1)})
    e.add_row({1: Fraction(1), 0: Fraction(3)})
    assert 1 not in e.rows[2]
    assert e.solve_for(2) == {0: Fraction(3)}
    assert e.solve_for(0) is None


def test_reduce_to_normal_form():
    e = SparseEchelon()
    e.add_row({1: Fraction(1), 0: Fraction(-2)})
    assert e.reduce({1: Fraction(3)}) == {0: Fraction(6)}


def test_cyclotomic_coefficients():
    e = SparseEchelon()
    w = CycNum.mu(3)
    e.add_row({0: w, 1: CycNum.rational(1)})
    assert e.rows[1][1] == 1
    assert e.reduce({1: CycNum.rational(1)}) == {0: -w}
