# tests/test_words.py

from fractions import Fraction

from app.core.cyclotomic import INFINITY, CycNum
from app.core.words import (
    WordPoly,
    antipode,
    concat,
    deconcat_coproduct,
    letter,
    make_word,
    shuffle,
    shuffle_mass,
    shuffle_words,
    word_text,
    words_over,
    words_upto,
)

A, B, C = make_word(0), make_word(1), make_word(-1)


def test_shuffle_of_letters():
    assert shuffle_words(A, B) == {A + B: 1, B + A: 1}
    assert shuffle_words(A, A) == {A + A: 2}


def test_shuffle_mass_matches_binomial():
    u, v = make_word(0, 1), make_word(0, 1, -1)
    assert sum(shuffle_words(u, v).values()) == shuffle_mass(2, 3) == 10


def test_shuffle_is_commutative():
    u, v = make_word(0, 1), make_word(1, -1)
    assert shuffle(u, v) == shuffle(v, u)


def test_shuffle_is_associative():
    u, v, w = make_word(0, 1), make_word(1), make_word(-1, 0)
    assert shuffle(shuffle(u, v), w) == shuffle(u, shuffle(v, w))


def test_shuffle_with_empty_word():
    assert shuffle((), A + B) == WordPoly.from_word(A + B)


def test_concat_and_scale():
    p = WordPoly.letter(0) + WordPoly.letter(1, 2)
    q = concat(p, WordPoly.letter(1))
    assert q.coeff(A + B) == 1
    assert q.coeff(B + B) == 2
    assert (p * Fraction(1, 2)).coeff(B) == 1


def test_infinity_letters_vanish_in_polynomials():
    p = WordPoly.letter(0) - WordPoly.letter(INFINITY)
    assert p == WordPoly.letter(0)


def test_antipode_reverses_with_sign():
    w = make_word(0, 1, -1)
    assert antipode(w) == WordPoly.from_word(make_word(-1, 1, 0), -1)


def test_antipode_identity_on_weight_two():
    # sum over deconcatenation of S(u) shuffled with v vanishes for a nonempty word
    w = make_word(0, 1)
    total = WordPoly.zero()
    for u, v in deconcat_coproduct(w):
        total = total + shuffle(antipode(u), v)
    assert total.is_zero()


def test_words_over_counts_and_order():
    alphabet = [letter(1), letter(0), letter(CycNum.mu(3))]
    words = words_over(alphabet, 2)
    assert len(words) == 9
    assert words[0] == (letter(0), letter(0))
    assert len(words_upto(alphabet, 2)) == 1 + 3 + 9


def test_word_text():
    assert word_text(make_word(0, 1)) == "w[0,1]"
    assert word_text(()) == "w[]"
