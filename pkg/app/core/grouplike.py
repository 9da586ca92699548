# app/core/grouplike.py

"""
Weight-truncated group-like series.

A series is a lazy coefficient function Word -> Value with memoization. Values are
CmzvExpr in symbolic mode and mpmath complex numbers in numeric mode.
"""

import logging
from fractions import Fraction
from math import factorial
from threading import RLock
from typing import Callable, Iterable

import mpmath as mp

from app.core.cyclotomic import CycNum
from app.core.errors import AlphabetMismatch, InconsistentInput, ModeMismatch, NonInjectiveMap, NotGroupLike
from app.core.expr import CmzvExpr
from app.core.words import EMPTY, Letter, Word, WordPoly, shuffle_words, word_text, words_over

logger = logging.getLogger(__name__)

SYMBOLIC = "symbolic"
NUMERIC = "numeric"


def unit_value(mode: str):
    return CmzvExpr.one() if mode == SYMBOLIC else mp.mpc(1)


def zero_value(mode: str):
    return CmzvExpr.zero() if mode == SYMBOLIC else mp.mpc(0)


def scale_value(v, c, mode: str):
    """Multiply a value by a rational or cyclotomic scalar."""
    if mode == SYMBOLIC:
        return v.scale(c)
    if isinstance(c, CycNum):
        return v * c.eval_numeric(mp.mp.dps)
    c = Fraction(c)
    return v * mp.mpf(c.numerator) / c.denominator


def is_zero_value(v, mode: str, tol=None) -> bool:
    if mode == SYMBOLIC:
        return v.is_zero()
    return abs(v) <= (tol if tol is not None else mp.mpf(10) ** (2 - mp.mp.dps))


class GroupLikeSeries:
    """Lazily evaluated series over a finite alphabet, truncated at a weight."""

    def __init__(
        self,
        alphabet: Iterable[Letter],
        weight: int,
        coeff_fn: Callable[[Word], object],
        mode: str = SYMBOLIC,
        certified: bool = True,
        name: str = "",
    ):
        if mode not in (SYMBOLIC, NUMERIC):
            raise ValueError(f"unknown mode {mode!r}")
        self.alphabet = frozenset(alphabet)
        self.weight = weight
        self.mode = mode
        self.certified = certified
        self.name = name
        self._fn = coeff_fn
        self._memo: dict[Word, object] = {}
        self._lock = RLock()

    def __getitem__(self, w) -> object:
        w = tuple(w)
        if not w:
            return unit_value(self.mode)
        if len(w) > self.weight:
            raise ValueError(f"word {word_text(w)} exceeds truncation weight {self.weight}")
        with self._lock:
            if w in self._memo:
                return self._memo[w]
        for x in w:
            if x not in self.alphabet:
                return zero_value(self.mode)
        value = self._fn(w)
        with self._lock:
            self._memo[w] = value
        return value

    def coeff_poly(self, p: WordPoly):
        """Linear extension of the coefficient map to a word polynomial."""
        total = zero_value(self.mode)
        for w, c in p.terms.items():
            if len(w) > self.weight:
                raise ValueError(f"word {word_text(w)} exceeds truncation weight {self.weight}")
            v = self[w]
            if self.mode == SYMBOLIC and v.is_zero():
                continue
            total = total + scale_value(v, c, self.mode)
        return total

    def words(self, weight: int | None = None) -> list[Word]:
        top = self.weight if weight is None else weight
        return [w for n in range(top + 1) for w in words_over(self.alphabet, n)]

    def dump(self) -> dict:
        coeffs = {}
        for w in self.words():
            v = self[w]
            if self.mode == SYMBOLIC:
                if not v.is_zero():
                    coeffs[word_text(w)] = v.to_text()
            elif v != 0:
                coeffs[word_text(w)] = [mp.nstr(v.real, 20), mp.nstr(v.imag, 20)]
        return {
            "alphabet": sorted((x.to_text() for x in self.alphabet)),
            "W": self.weight,
            "mode": self.mode,
            "coeffs": coeffs,
        }

    def __repr__(self):
        return f"GroupLikeSeries({self.name or 'anonymous'}, W={self.weight}, mode={self.mode})"


def _check_compatible(g1: GroupLikeSeries, g2: GroupLikeSeries) -> None:
    if g1.mode != g2.mode:
        raise ModeMismatch(f"cannot combine {g1.mode} and {g2.mode} series")
    if g1.alphabet != g2.alphabet or g1.weight != g2.weight:
        raise AlphabetMismatch("series have different alphabets or truncation weights")


# ========== CONSTRUCTORS ==========


def unit(alphabet: Iterable[Letter], weight: int, mode: str = SYMBOLIC) -> GroupLikeSeries:
    zero = zero_value(mode)
    return GroupLikeSeries(alphabet, weight, lambda w: zero, mode, name="1")


def explicit(alphabet: Iterable[Letter], weight: int, coeffs: dict, mode: str = SYMBOLIC) -> GroupLikeSeries:
    """A series from a coefficient table; unlisted words are 0. Not assumed group-like."""
    zero = zero_value(mode)
    table = {tuple(w): v for w, v in coeffs.items()}
    return GroupLikeSeries(alphabet, weight, lambda w: table.get(w, zero), mode, certified=False, name="explicit")


def exp_letter(value, letters, alphabet: Iterable[Letter], weight: int, mode: str = SYMBOLIC) -> GroupLikeSeries:
    """exp(value * (sum of letters)); the coefficient of any word in those letters is value^n/n!."""
    chosen = frozenset([letters] if isinstance(letters, Letter) else letters)
    powers = [unit_value(mode)]
    for n in range(1, weight + 1):
        powers.append(powers[-1] * value)

    def coeff(w: Word):
        if all(x in chosen for x in w):
            return scale_value(powers[len(w)], Fraction(1, factorial(len(w))), mode)
        return zero_value(mode)

    return GroupLikeSeries(alphabet, weight, coeff, mode, name="exp")


# ========== OPERATIONS ==========


def series_mul(g1: GroupLikeSeries, g2: GroupLikeSeries) -> GroupLikeSeries:
    """Concatenation product g1 * g2."""
    _check_compatible(g1, g2)
    mode = g1.mode

    def coeff(w: Word):
        total = zero_value(mode)
        for i in range(len(w) + 1):
            a = g1[w[:i]]
            if mode == SYMBOLIC and a.is_zero():
                continue
            b = g2[w[i:]]
            if mode == SYMBOLIC and b.is_zero():
                continue
            total = total + a * b
        return total

    return GroupLikeSeries(g1.alphabet, g1.weight, coeff, mode, g1.certified and g2.certified, name="product")


def series_product(*factors: GroupLikeSeries) -> GroupLikeSeries:
    """Left-to-right concatenation product of several series."""
    if not factors:
        raise ValueError("empty product")
    out = factors[0]
    for g in factors[1:]:
        out = series_mul(out, g)
    return out


def series_inverse(g: GroupLikeSeries) -> GroupLikeSeries:
    """Inverse of a group-like series, G^-1[w] = G[antipode(w)]."""
    if not g.certified:
        ok, witness = is_grouplike(g)
        if not ok:
            raise NotGroupLike("series is not group-like", witness=[word_text(x) for x in witness])
    mode = g.mode

    def coeff(w: Word):
        v = g[tuple(reversed(w))]
        return -v if len(w) % 2 else v

    return GroupLikeSeries(g.alphabet, g.weight, coeff, mode, True, name="inverse")


def hom_map(g: GroupLikeSeries, sigma) -> GroupLikeSeries:
    """Relabel letters by an injective map sigma (dict or callable)."""
    lookup = sigma if callable(sigma) else sigma.__getitem__
    image = {x: lookup(x) for x in g.alphabet}
    if len(set(image.values())) != len(image):
        raise NonInjectiveMap("letter map is not injective on the alphabet")
    back = {y: x for x, y in image.items()}

    def coeff(w: Word):
        return g[tuple(back[x] for x in w)]

    return GroupLikeSeries(image.values(), g.weight, coeff, g.mode, g.certified, name="relabel")


def substitute(g: GroupLikeSeries, phi: Callable[[Letter], WordPoly], alphabet: Iterable[Letter]) -> GroupLikeSeries:
    """Pullback along a letter map: H[x1...xn] = G[phi(x1)...phi(xn)]."""
    cache: dict[Letter, WordPoly] = {}

    def image(x: Letter) -> WordPoly:
        if x not in cache:
            cache[x] = phi(x)
        return cache[x]

    def coeff(w: Word):
        p = WordPoly.one()
        for x in w:
            p = p * image(x)
            if p.is_zero():
                return zero_value(g.mode)
        return g.coeff_poly(p)

    return GroupLikeSeries(alphabet, g.weight, coeff, g.mode, g.certified, name="pullback")


def regularized_lift(
    j: Callable[[Word], object],
    x1: Letter,
    x2: Letter,
    alphabet: Iterable[Letter],
    weight: int,
    mode: str = SYMBOLIC,
    validate: bool = False,
) -> GroupLikeSeries:
    """
    The group-like extension of j with zero coefficients on x1 and x2.

    j is consulted only on words that neither start with x1 nor end with x2.
    """
    series: GroupLikeSeries

    def coeff(w: Word):
        m = 0
        while m < len(w) and w[m] == x1:
            m += 1
        rest = w[m:]
        n = 0
        while n < len(rest) and rest[len(rest) - 1 - n] == x2:
            n += 1
        if m == 0 and n == 0:
            return j(w)
        if m > 0:
            if not rest:
                return zero_value(mode)
            head = (x1,) * (m - 1)
            total = zero_value(mode)
            for i in range(1, len(rest) + 1):
                total = total + series[head + rest[:i] + (x1,) + rest[i:]]
            return scale_value(total, Fraction(-1, m), mode)
        u = rest[: len(rest) - n]
        if not u:
            return zero_value(mode)
        tail = (x2,) * (n - 1)
        total = zero_value(mode)
        for i in range(len(u)):
            total = total + series[u[:i] + (x2,) + u[i:] + tail]
        return scale_value(total, Fraction(-1, n), mode)

    series = GroupLikeSeries(alphabet, weight, coeff, mode, True, name="regularized")
    if validate:
        ok, witness = is_grouplike(series)
        if not ok:
            raise InconsistentInput(
                "coefficients violate the shuffle relations",
                witness=[word_text(x) for x in witness],
            )
    return series


def is_grouplike(g: GroupLikeSeries, max_weight: int | None = None, tol=None) -> tuple[bool, tuple[Word, Word] | None]:
    """Check G[u sh v] = G[u] G[v] for all words with |u| + |v| <= W."""
    top = g.weight if max_weight is None else min(max_weight, g.weight)
    one = unit_value(g.mode)
    if g.mode == SYMBOLIC and not (g[EMPTY] - one).is_zero():
        return False, (EMPTY, EMPTY)
    words = [w for n in range(1, top) for w in words_over(g.alphabet, n)]
    for iu, u in enumerate(words):
        for v in words[iu:]:
            if len(u) + len(v) > top:
                continue
            lhs = zero_value(g.mode)
            for w, k in shuffle_words(u, v).items():
                lhs = lhs + scale_value(g[w], k, g.mode)
            diff = lhs - g[u] * g[v]
            if not is_zero_value(diff, g.mode, tol):
                logger.debug(f"shuffle law fails on {word_text(u)}, {word_text(v)}")
                return False, (u, v)
    return True, None
