# app/core/words.py

"""
Words in the letters w(a) = dx/(x - a) and the shuffle/concatenation algebra on them.

The first letter of a word is the outermost form of the iterated integral, i.e. the
one integrated nearest to the end point of the path.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from threading import RLock
from typing import Iterable, Iterator

from cachetools import LRUCache, cached

from app.core.cyclotomic import ZERO, CycNum, ExtPoint, as_cyc, is_infinite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Letter:
    pole: ExtPoint

    def sort_key(self) -> tuple:
        return self.pole.sort_key()

    def is_infinite(self) -> bool:
        return is_infinite(self.pole)

    def to_text(self) -> str:
        return self.pole.to_text()

    def __repr__(self):
        return f"w({self.to_text()})"


Word = tuple[Letter, ...]

EMPTY: Word = ()


def letter(pole) -> Letter:
    if isinstance(pole, Letter):
        return pole
    return Letter(pole if is_infinite(pole) else as_cyc(pole))


def make_word(*poles) -> Word:
    return tuple(letter(p) for p in poles)


def word_sort_key(w: Word) -> tuple:
    """Graded lexicographic order, letters ordered by level then coefficients, infinity last."""
    return (len(w), tuple(x.sort_key() for x in w))


def word_text(w: Word) -> str:
    return "w[" + ",".join(x.to_text() for x in w) + "]"


def has_infinity(w: Word) -> bool:
    return any(x.is_infinite() for x in w)


class WordPoly:
    """Finite linear combination of words with cyclotomic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict[Word, CycNum] = {}
        for w, c in (terms or {}).items():
            if has_infinity(w):
                continue
            c = as_cyc(c)
            if not c.is_zero():
                clean[w] = c
        self.terms = clean

    # ---------- constructors ----------

    @classmethod
    def from_word(cls, w: Word, coeff=1) -> "WordPoly":
        return cls({tuple(w): coeff})

    @classmethod
    def one(cls) -> "WordPoly":
        return cls({EMPTY: 1})

    @classmethod
    def zero(cls) -> "WordPoly":
        return cls()

    @classmethod
    def letter(cls, pole, coeff=1) -> "WordPoly":
        return cls({(letter(pole),): coeff})

    @classmethod
    def _raw(cls, terms: dict) -> "WordPoly":
        out = cls.__new__(cls)
        out.terms = {w: c for w, c in terms.items() if not c.is_zero()}
        return out

    # ---------- access ----------

    def __iter__(self) -> Iterator[tuple[Word, CycNum]]:
        return iter(sorted(self.terms.items(), key=lambda kv: word_sort_key(kv[0])))

    def __len__(self):
        return len(self.terms)

    def coeff(self, w: Word) -> CycNum:
        return self.terms.get(tuple(w), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def homogeneous(self, weight: int) -> "WordPoly":
        return WordPoly._raw({w: c for w, c in self.terms.items() if len(w) == weight})

    def max_weight(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def letters(self) -> set[Letter]:
        return {x for w in self.terms for x in w}

    # ---------- linear structure ----------

    def __add__(self, other):
        if not isinstance(other, WordPoly):
            return NotImplemented
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc[w] + c if w in acc else c
        return WordPoly._raw(acc)

    def __neg__(self):
        return WordPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WordPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, k) -> "WordPoly":
        k = as_cyc(k)
        return WordPoly._raw({w: c * k for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, WordPoly):
            return concat(self, other)
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, WordPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self:
            ct = c.to_text()
            parts.append(word_text(w) if ct == "1" else f"({ct})*{word_text(w)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"WordPoly({self.to_text()})"


def as_poly(x) -> WordPoly:
    if isinstance(x, WordPoly):
        return x
    if isinstance(x, tuple):
        return WordPoly.from_word(x)
    raise TypeError(f"cannot interpret {x!r} as a word polynomial")


# ========== SHUFFLE ==========


@cached(cache=LRUCache(maxsize=65536), lock=RLock())
def shuffle_words(u: Word, v: Word) -> dict[Word, int]:
    """Shuffle of two words as a multiplicity map."""
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out: dict[Word, int] = {}
    for w, k in shuffle_words(u[1:], v).items():
        key = (u[0],) + w
        out[key] = out.get(key, 0) + k
    for w, k in shuffle_words(u, v[1:]).items():
        key = (v[0],) + w
        out[key] = out.get(key, 0) + k
    return out


def shuffle(u, v) -> WordPoly:
    u, v = as_poly(u), as_poly(v)
    acc: dict[Word, CycNum] = {}
    for wu, cu in u.terms.items():
        for wv, cv in v.terms.items():
            c = cu * cv
            for w, k in shuffle_words(wu, wv).items():
                term = c * k
                acc[w] = acc[w] + term if w in acc else term
    return WordPoly._raw(acc)


def shuffle_mass(n: int, m: int) -> int:
    return comb(n + m, n)


def concat(u, v) -> WordPoly:
    u, v = as_poly(u), as_poly(v)
    acc: dict[Word, CycNum] = {}
    for wu, cu in u.terms.items():
        for wv, cv in v.terms.items():
            w = wu + wv
            term = cu * cv
            acc[w] = acc[w] + term if w in acc else term
    return WordPoly._raw(acc)


def antipode_word(w: Word) -> tuple[int, Word]:
    return (-1) ** len(w), tuple(reversed(w))


def antipode(u) -> WordPoly:
    u = as_poly(u)
    acc = {}
    for w, c in u.terms.items():
        sign, rw = antipode_word(w)
        acc[rw] = acc[rw] + c * sign if rw in acc else c * sign
    return WordPoly._raw(acc)


def deconcat_coproduct(w: Word) -> list[tuple[Word, Word]]:
    w = tuple(w)
    return [(w[:i], w[i:]) for i in range(len(w) + 1)]


def words_over(alphabet: Iterable[Letter], weight: int) -> list[Word]:
    """All words of exactly the given weight, in graded-lex order."""
    letters = sorted(set(alphabet), key=lambda x: x.sort_key())
    out: list[Word] = [EMPTY]
    for _ in range(weight):
        out = [w + (x,) for w in out for x in letters]
    return out


def words_upto(alphabet: Iterable[Letter], weight: int) -> list[Word]:
    letters = list(alphabet)
    return [w for n in range(weight + 1) for w in words_over(letters, n)]
