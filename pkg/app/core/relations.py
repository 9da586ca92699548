# app/core/relations.py

"""
Q-linear relations among colored MZVs of a fixed level N and weight w.

The columns of a relation system are the weight-w monomials in the atoms L_s(mu^a),
a taken at levels dividing N, and 2PI. Rows come from the shuffle and stuffle products,
Hoffman's relation, the distribution relations, the weight-1 relations of 2PI, the
triangular faces of the orbit graph of [0, 1] and the comparison of two chains of unital
maps sharing their end points. Every row of lower weight is multiplied by every
complementary monomial. Pivots are taken at the largest column, so the columns left
without a pivot (the basis) favour products and shallow atoms.
"""

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path
from threading import RLock
from typing import Iterable, Iterator, Sequence

import mpmath as mp
from cachetools import LRUCache, cached
from pydantic import ValidationError
from sympy import divisors, factorint, primefactors

from app.config import get_settings
from app.core.catalog import load_chains
from app.core.convert import BRANCH_TOL, base_series, convert_word, corner_series, face_plans, level_alphabet, word_atom
from app.core.cyclotomic import ONE, ZERO, ExtPoint, is_infinite, totient
from app.core.errors import (
    EndpointMismatch,
    InconsistentInput,
    InconsistentLinearTerms,
    NotUnital,
    UnderdeterminedSystem,
    UnknownGenerator,
    WeightMismatch,
)
from app.core.expr import TWOPI, CmzvExpr, CmzvIndex, Monomial, monomial, monomial_key, monomial_text, zeta
from app.core.geometry import RationalMap, is_unital, level_support
from app.core.grouplike import GroupLikeSeries, series_product, substitute
from app.core.linalg import SparseEchelon
from app.core.numeric import EvalConfig, eval_expr
from app.core.words import Letter, Word, WordPoly, letter, shuffle_words, words_over
from app.schemas.relations import DimensionReport, RelationTable

logger = logging.getLogger(__name__)

GENERATORS = ("shuffle", "stuffle", "distribution", "symmetry", "nonstandard")
DEFAULT_GENERATORS = ("shuffle", "stuffle", "distribution", "symmetry")
TABLE_VERSION = "2"

Pair = tuple[int, int]  # (s, a) with a an exponent at the system level


# ========== DIMENSIONS ==========


def _mobius(k: int) -> int:
    exponents = factorint(k).values()
    return 0 if any(e > 1 for e in exponents) else (-1) ** len(exponents)


def deligne_recurrence(level: int) -> dict[int, int]:
    """Coefficients p_k with D(n) = sum p_k D(n - k)."""
    if level == 1:
        return {2: 1, 3: 1}
    if level == 2:
        return {1: 1, 2: 1}
    nu = len(primefactors(level))
    a = totient(level) // 2 + nu
    b = nu - 1
    return {1: a, 2: -b}


def deligne_series(top: int, level: int) -> list[int]:
    """[D(0), D(1), ..., D(top)] for the given level."""
    rec = deligne_recurrence(level)
    d = [1]
    for n in range(1, top + 1):
        d.append(sum(p * d[n - k] for k, p in rec.items() if k <= n))
    return d


def deligne_bound(w: int, level: int) -> int:
    """Deligne's upper bound for the dimension of weight-w level-N colored MZVs."""
    if w < 0:
        return 0
    return deligne_series(w, level)[w]


@dataclass(frozen=True)
class GradedDims:
    h: tuple[int, ...]
    c: tuple[Fraction, ...]
    dims: tuple

    def to_json(self) -> dict:
        return {"h": list(self.h), "c": [str(x) for x in self.c], "dims": [str(x) for x in self.dims]}


def log_coefficients(h: Sequence[int]) -> list[Fraction]:
    """c_1, c_2, ... with sum c_m t^m = log(1 + sum h_m t^m), h given from weight 1."""
    c: list[Fraction] = []
    for m in range(1, len(h) + 1):
        acc = Fraction(h[m - 1])
        for j in range(1, m):
            acc -= Fraction(j, m) * c[j - 1] * h[m - j - 1]
        c.append(acc)
    return c


def graded_dims(h: Sequence[int]) -> GradedDims:
    c = log_coefficients(h)
    dims = []
    for m in range(1, len(h) + 1):
        v = sum((Fraction(_mobius(k), k) * c[m // k - 1] for k in divisors(m)), Fraction(0))
        dims.append(v.numerator if v.denominator == 1 else v)
    return GradedDims(tuple(h), tuple(c), tuple(dims))


def indecomposable_dims(h: Sequence[int]) -> list:
    """Number of algebra generators in each weight of a free commutative graded algebra with Hilbert series 1 + sum h_m t^m."""
    return list(graded_dims(h).dims)


# ========== ATOMS AND MONOMIALS ==========


def compositions(n: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    return [(k,) + rest for k in range(1, n + 1) for rest in compositions(n - k)]


@lru_cache(maxsize=256)
def raw_indices(level: int, weight: int) -> tuple[tuple[Pair, ...], ...]:
    """Convergent indices of the given weight with exponents taken at the given level."""
    out = []
    for s in compositions(weight) if weight > 0 else []:
        for a in product(range(level), repeat=len(s)):
            if s[0] == 1 and a[0] == 0:
                continue
            out.append(tuple(zip(s, a)))
    return tuple(out)


def index_atom(level: int, pairs: Sequence[Pair]) -> CmzvExpr:
    return CmzvExpr.atom(CmzvIndex(level, tuple(s for s, _ in pairs), tuple(a for _, a in pairs)))


@lru_cache(maxsize=256)
def atoms_of_weight(level: int, weight: int) -> tuple:
    """Distinct weight-w atoms of level dividing N, 2PI included in weight 1."""
    seen = {CmzvIndex(level, tuple(s for s, _ in p), tuple(a for _, a in p)) for p in raw_indices(level, weight)}
    if weight == 1:
        seen.add(TWOPI)
    return tuple(sorted(seen, key=lambda x: x.sort_key()))


def twopi_degree(m: Monomial) -> int:
    return sum(1 for a in m if a is TWOPI)


def column_key(m: Monomial) -> tuple:
    """Columns holding 2PI come last, then single atoms, deeper atoms later."""
    return (twopi_degree(m) > 0, len(m) == 1, monomial_key(m))


@lru_cache(maxsize=64)
def enumerate_monomials(level: int, weight: int) -> tuple[Monomial, ...]:
    """Every product of atoms of total weight w, in column order."""
    pool = [a for r in range(1, weight + 1) for a in atoms_of_weight(level, r)]
    found: list[Monomial] = []

    def extend(start: int, remaining: int, chosen: tuple) -> None:
        if remaining == 0:
            found.append(monomial(chosen))
            return
        for i in range(start, len(pool)):
            if pool[i].weight <= remaining:
                extend(i, remaining - pool[i].weight, chosen + (pool[i],))

    extend(0, weight, ())
    return tuple(sorted(set(found), key=column_key))


# ========== RELATION FAMILIES ==========


def convergent_words(level: int, weight: int) -> list[Word]:
    one, zero = letter(ONE), letter(ZERO)
    return [w for w in words_over(level_alphabet(level), weight) if w[0] != one and w[-1] != zero]


def shuffle_relations(level: int, weight: int) -> list[CmzvExpr]:
    """I(u) I(v) = sum I(t) over the shuffle of u and v, for convergent u and v."""
    rows = []
    for r in range(1, weight // 2 + 1):
        left = convergent_words(level, r)
        right = convergent_words(level, weight - r)
        for i, u in enumerate(left):
            for j, v in enumerate(right):
                if 2 * r == weight and j < i:
                    continue
                expanded = CmzvExpr.zero()
                for t, c in shuffle_words(u, v).items():
                    expanded = expanded + word_atom(t).scale(c)
                rows.append(word_atom(u) * word_atom(v) - expanded)
    logger.debug(f"shuffle N={level} w={weight}: {len(rows)} rows")
    return rows


@lru_cache(maxsize=65536)
def quasi_shuffle(u: tuple[Pair, ...], v: tuple[Pair, ...], level: int) -> tuple[tuple[tuple[Pair, ...], int], ...]:
    """Stuffle product of two indices; merged letters add exponents and arguments."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: dict[tuple[Pair, ...], int] = {}
    merged = (u[0][0] + v[0][0], (u[0][1] + v[0][1]) % level)
    for head, rest in ((u[0], quasi_shuffle(u[1:], v, level)), (v[0], quasi_shuffle(u, v[1:], level)), (merged, quasi_shuffle(u[1:], v[1:], level))):
        for t, k in rest:
            key = (head,) + t
            out[key] = out.get(key, 0) + k
    return tuple(out.items())


def hoffman_relations(level: int, weight: int) -> list[CmzvExpr]:
    """
    (1;0) * w minus the shuffle of w(1) with the word of w: the divergent term
    L_{1,s}(1, a) occurs on both sides and cancels.
    """
    y = ((1, 0),)
    head = (letter(ONE),)
    rows = []
    for u in raw_indices(level, weight - 1):
        sign, word = CmzvIndex(level, tuple(s for s, _ in u), tuple(a for _, a in u)).to_word()
        stuffled = CmzvExpr.zero()
        for t, k in quasi_shuffle(y, u, level):
            if t != y + u:
                stuffled = stuffled + index_atom(level, t).scale(k)
        shuffled = CmzvExpr.zero()
        for t, k in shuffle_words(head, word).items():
            if t != head + word:
                shuffled = shuffled + word_atom(t).scale(k)
        rows.append(stuffled + shuffled.scale(sign))
    return rows


def stuffle_relations(level: int, weight: int, hoffman: bool = True) -> list[CmzvExpr]:
    """L(u) L(v) = sum L(t) over the quasi-shuffle of u and v, plus Hoffman's relation."""
    rows = []
    for r in range(1, weight // 2 + 1):
        left = raw_indices(level, r)
        right = raw_indices(level, weight - r)
        for i, u in enumerate(left):
            for j, v in enumerate(right):
                if 2 * r == weight and j < i:
                    continue
                expanded = CmzvExpr.zero()
                for t, k in quasi_shuffle(u, v, level):
                    expanded = expanded + index_atom(level, t).scale(k)
                rows.append(index_atom(level, u) * index_atom(level, v) - expanded)
    if hoffman:
        rows += hoffman_relations(level, weight)
    logger.debug(f"stuffle N={level} w={weight}: {len(rows)} rows")
    return rows


def distribution_relations(level: int, weight: int, d: int | None = None) -> list[CmzvExpr]:
    """
    L_s(x1^d, ..., xk^d) = d^(w - k) sum over y_i^d = x_i^d of L_s(y1, ..., yk).

    With d given only the lift from level N/d to N is produced; otherwise every
    divisor M of N and every d > 1 dividing M.
    """
    if d is not None:
        if d < 1 or level % d:
            raise InconsistentInput(f"{d} does not divide the level {level}", d=d)
        cases = [(level, d)] if d > 1 else []
    else:
        cases = [(m, e) for m in divisors(level) for e in divisors(m) if e > 1]
    rows = []
    for m, e in cases:
        sub = m // e
        for s in compositions(weight):
            k = len(s)
            factor = Fraction(e) ** (weight - k)
            for b in product(range(sub), repeat=k):
                if s[0] == 1 and b[0] == 0:
                    continue
                lhs = CmzvExpr.atom(CmzvIndex(m, s, tuple(e * x for x in b)))
                total = CmzvExpr.zero()
                for j in product(range(e), repeat=k):
                    total = total + CmzvExpr.atom(CmzvIndex(m, s, tuple(x + y * sub for x, y in zip(b, j))))
                rows.append(lhs - total.scale(factor))
    logger.debug(f"distribution N={level} w={weight}: {len(rows)} rows")
    return rows


def twopi_relations(level: int, weight: int) -> list[CmzvExpr]:
    """L1(mu^k) - L1(mu^(N-k)) = (1/2 - k/N) 2PI for 2k > N, and (2PI)^2 = -24 zeta(2)."""
    rows = []
    if weight == 1 and level >= 3:
        for k in range(1, level):
            if 2 * k > level:
                rows.append(
                    CmzvExpr.atom(CmzvIndex(level, (1,), (k,)))
                    - CmzvExpr.atom(CmzvIndex(level, (1,), (level - k,)))
                    - CmzvExpr.atom(TWOPI, Fraction(1, 2) - Fraction(k, level))
                )
    if weight == 2:
        rows.append(CmzvExpr.atom(TWOPI) * CmzvExpr.atom(TWOPI) + zeta(2).scale(24))
    return rows


# ========== NONSTANDARD RELATIONS ==========


TARGET_ALPHABET = frozenset({letter(ZERO), letter(ONE)})


def _special(p: ExtPoint) -> bool:
    return is_infinite(p) or p == ZERO or p == ONE


def _corner_letters(vertex: ExtPoint) -> frozenset[Letter]:
    return TARGET_ALPHABET if is_infinite(vertex) else frozenset({letter(vertex)})


def pullback_series(r: RationalMap, level: int, weight: int) -> GroupLikeSeries:
    """Series of the path R([0, 1]) over {w(0), w(1)}: the base series at R^* of each letter."""
    support = level_support(level)
    cache: dict[Letter, WordPoly] = {}

    def phi(x: Letter) -> WordPoly:
        if x not in cache:
            cache[x] = r.pullback_letter(x.pole, support)
        return cache[x]

    return substitute(base_series(level, weight), phi, TARGET_ALPHABET)


def _check_chain(name: str, chain: Sequence[RationalMap], level: int) -> None:
    if not chain:
        raise InconsistentInput(f"chain {name} is empty")
    for k, r in enumerate(chain):
        if not is_unital(r, level):
            raise NotUnital(f"{name}{k + 1} is not {level}-unital", map=r.to_text())
    for k in range(len(chain) - 1):
        if chain[k](ONE) != chain[k + 1](ZERO):
            raise EndpointMismatch(
                f"{name}{k + 1}(1) = {chain[k](ONE).to_text()} but {name}{k + 2}(0) = {chain[k + 1](ZERO).to_text()}"
            )


@dataclass(frozen=True)
class _Layout:
    """Factors of a composite path from its start (rightmost) to its end (leftmost)."""

    maps: tuple[RationalMap, ...]
    corners: tuple[tuple[int, ExtPoint], ...]  # (position, vertex); position j sits before map j


def _layout(chain: Sequence[RationalMap], with_ends: bool) -> _Layout:
    corners = []
    if with_ends and _special(chain[0](ZERO)):
        corners.append((0, chain[0](ZERO)))
    for k in range(1, len(chain)):
        joint = chain[k](ZERO)
        if _special(joint):
            corners.append((k, joint))
    if with_ends and _special(chain[-1](ONE)):
        corners.append((len(chain), chain[-1](ONE)))
    return _Layout(tuple(chain), tuple(corners))


def _solve_corners(lay_r: _Layout, lay_t: _Layout, level: int, cfg: EvalConfig) -> tuple[list, list]:
    """Corner constants of both chains from the weight-1 coefficients of PATH_R = PATH_T."""
    unknowns = [(1, v) for _, v in lay_r.corners] + [(-1, v) for _, v in lay_t.corners]
    first_r = [pullback_series(r, level, 1) for r in lay_r.maps]
    first_t = [pullback_series(r, level, 1) for r in lay_t.maps]
    echelon = SparseEchelon()
    residuals = []
    for x in sorted(TARGET_ALPHABET, key=lambda y: y.sort_key()):
        rhs = CmzvExpr.zero()
        for g in first_t:
            rhs = rhs + g[(x,)]
        for g in first_r:
            rhs = rhs - g[(x,)]
        row: dict = {j: Fraction(sign) for j, (sign, v) in enumerate(unknowns) if x in _corner_letters(v)}
        row[-1] = -rhs
        reduced = echelon.reduce(row)
        if not reduced:
            continue
        if set(reduced) == {-1}:
            residuals.append((x, reduced[-1]))
            continue
        echelon.add_row(reduced)
    for x, r in residuals:
        value = eval_expr(r, cfg)
        if abs(value) > BRANCH_TOL:
            raise InconsistentLinearTerms(
                f"weight-1 coefficient of {x.to_text()} differs by {mp.nstr(value, 8)}", letter=x.to_text()
            )
    values = []
    for j, (_, v) in enumerate(unknowns):
        row = echelon.rows.get(j)
        if row is None or any(c not in (j, -1) for c in row):
            raise UnderdeterminedSystem(f"corner constant at {v.to_text()} is not determined", vertex=v.to_text())
        values.append(-row[-1] if -1 in row else CmzvExpr.zero())
    n = len(lay_r.corners)
    return values[:n], values[n:]


def _path_series(lay: _Layout, constants: list, level: int, weight: int) -> GroupLikeSeries:
    at = {pos: (v, c) for (pos, v), c in zip(lay.corners, constants)}
    factors = []
    for k in range(len(lay.maps) + 1):
        if k in at:
            v, c = at[k]
            factors.append(corner_series(v, c, TARGET_ALPHABET, weight))
        if k < len(lay.maps):
            factors.append(pullback_series(lay.maps[k], level, weight))
    return series_product(*reversed(factors))


def nonstandard_relations(
    chain_r: Sequence[RationalMap],
    chain_t: Sequence[RationalMap],
    level: int,
    weight: int,
    cfg: EvalConfig | None = None,
    verify: bool = True,
    name: str = "",
) -> list[CmzvExpr]:
    """
    Coefficients of PATH_R - PATH_T on every weight-w word in w(0), w(1).

    PATH is the product of the pulled-back series of the maps of a chain, later maps on
    the left, with exp(A w(v)) inserted wherever the path meets 0, 1 or infinity. The
    shared end points carry their constants on the R side only. With verify set, a row
    that does not vanish numerically raises InconsistentLinearTerms.
    """
    cfg = cfg or EvalConfig.from_settings()
    chain_r, chain_t = list(chain_r), list(chain_t)
    _check_chain("R", chain_r, level)
    _check_chain("T", chain_t, level)
    for what, p, q in (("start", chain_r[0](ZERO), chain_t[0](ZERO)), ("end", chain_r[-1](ONE), chain_t[-1](ONE))):
        if p != q:
            raise EndpointMismatch(f"chains have different {what} points {p.to_text()} and {q.to_text()}")
    lay_r, lay_t = _layout(chain_r, True), _layout(chain_t, False)
    const_r, const_t = _solve_corners(lay_r, lay_t, level, cfg)
    path_r = _path_series(lay_r, const_r, level, weight)
    path_t = _path_series(lay_t, const_t, level, weight)
    rows = []
    for u in words_over(TARGET_ALPHABET, weight):
        row = path_r[u] - path_t[u]
        if not row.is_zero():
            rows.append(row)
    if verify:
        for k, value in check_rows(rows, cfg):
            raise InconsistentLinearTerms(
                f"chain pair {name or 'ad hoc'}: row {k} evaluates to {mp.nstr(value, 3)} at N={level} w={weight}",
                chain=name,
                row=k,
            )
    logger.debug(f"nonstandard N={level} w={weight}: {len(rows)} rows")
    return rows


def catalog_nonstandard_relations(level: int, weight: int) -> list[CmzvExpr]:
    """Rows from every shipped chain pair whose level divides N."""
    rows = []
    for pair in load_chains():
        if level % pair.level or weight < 2:
            continue
        rows += nonstandard_relations(pair.chain_r, pair.chain_t, level, weight, name=pair.id)
    return rows


# ========== SYMMETRY ==========


def symmetry_relations(level: int, weight: int) -> list[CmzvExpr]:
    """
    Coefficients of the direct edge minus the detour around each empty triangular face of
    the orbit graph, on every convergent weight-w word. At level 4 these are the octahedral
    relations that shuffle, stuffle and distribution leave out.
    """
    rows = []
    words = convergent_words(level, weight)
    for direct, detour in face_plans(level):
        for w in words:
            row = convert_word(direct, w) - convert_word(detour, w)
            if not row.is_zero():
                rows.append(row)
    logger.debug(f"symmetry N={level} w={weight}: {len(rows)} rows")
    return rows


FAMILIES = {
    "shuffle": shuffle_relations,
    "stuffle": stuffle_relations,
    "distribution": distribution_relations,
    "symmetry": symmetry_relations,
    "nonstandard": catalog_nonstandard_relations,
}


def check_generators(names: Iterable[str]) -> tuple[str, ...]:
    names = tuple(sorted({n.strip() for n in names if n.strip()}))
    unknown = [n for n in names if n not in FAMILIES]
    if unknown:
        raise UnknownGenerator(f"unknown generator {', '.join(unknown)}; expected one of {', '.join(GENERATORS)}", names=unknown)
    return names


def check_rows(rows: Iterable[CmzvExpr], cfg: EvalConfig | None = None) -> list[tuple[int, object]]:
    """Rows whose numeric value exceeds 10^(5 - digits), with their residuals."""
    cfg = cfg or EvalConfig.from_settings()
    threshold = mp.mpf(10) ** (5 - cfg.digits)
    bad = []
    for k, row in enumerate(rows):
        value = abs(eval_expr(row, cfg))
        if value > threshold:
            bad.append((k, value))
    return bad


# ========== RELATION SYSTEMS ==========


class RelationSystem:
    """Echelon form of all relations found among the weight-w monomials of level N."""

    def __init__(self, level: int, weight: int, generators: Iterable[str] = ()):
        self.level = level
        self.weight = weight
        self.generators = tuple(generators)
        self.monomials = list(enumerate_monomials(level, weight))
        self.columns = {m: j for j, m in enumerate(self.monomials)}
        self.echelon = SparseEchelon()
        self.offered = 0

    def __repr__(self):
        return f"RelationSystem(N={self.level}, w={self.weight}, rank={self.rank}, basis={len(self.basis)})"

    def vector(self, e: CmzvExpr) -> dict:
        if e.is_zero():
            return {}
        if not e.is_homogeneous() or e.weight() != self.weight:
            raise WeightMismatch(
                f"expression has weights {sorted(e.weights())}, system has weight {self.weight}",
                weights=sorted(e.weights()),
            )
        vec = {}
        for m, c in e.terms.items():
            col = self.columns.get(m)
            if col is None:
                raise InconsistentInput(
                    f"{monomial_text(m)} is not a level-{self.level} monomial", monomial=monomial_text(m)
                )
            q = c.as_fraction()
            vec[col] = q if q is not None else c
        return vec

    def add(self, e: CmzvExpr) -> bool:
        """Insert a relation e = 0 with rational coefficients."""
        vec = self.vector(e)
        irrational = [x for x in vec.values() if not isinstance(x, Fraction)]
        if irrational:
            raise InconsistentInput(
                f"relation at N={self.level} w={self.weight} has irrational coefficient {irrational[0].to_text()}",
                coefficient=irrational[0].to_text(),
            )
        self.offered += 1
        return self.echelon.add_row(vec)

    def add_all(self, rows: Iterable[CmzvExpr]) -> int:
        return sum(1 for e in rows if self.add(e))

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def basis(self) -> list[int]:
        return self.echelon.basis(len(self.monomials))

    @property
    def basis_monomials(self) -> list[Monomial]:
        return [self.monomials[c] for c in self.basis]

    def counted(self, col: int) -> bool:
        """Odd powers of 2PI are purely imaginary at levels 1 and 2 and stay outside the real span."""
        return not (self.level <= 2 and twopi_degree(self.monomials[col]) % 2)

    @property
    def dimension(self) -> int:
        return sum(1 for c in self.basis if self.counted(c))

    def expression(self, vec: dict) -> CmzvExpr:
        return CmzvExpr({self.monomials[c]: x for c, x in vec.items()})

    def reduce(self, e: CmzvExpr) -> CmzvExpr:
        """e modulo the relations, written in basis monomials."""
        return self.expression(self.echelon.reduce(self.vector(e)))

    def coordinates(self, e: CmzvExpr) -> dict[str, str]:
        reduced = self.echelon.reduce(self.vector(e))
        return {monomial_text(self.monomials[c]): str(x) if isinstance(x, Fraction) else x.to_text() for c, x in sorted(reduced.items())}

    def row_expressions(self) -> Iterator[CmzvExpr]:
        for _, row in sorted(self.echelon.rows.items()):
            yield self.expression(row)

    def to_table(self) -> RelationTable:
        rows = [
            [(c, q.numerator, q.denominator) for c, q in sorted(row.items())]
            for _, row in sorted(self.echelon.rows.items())
        ]
        return RelationTable(
            level=self.level,
            weight=self.weight,
            generators=list(self.generators),
            monomials=[monomial_text(m) for m in self.monomials],
            rows=rows,
            basis=self.basis,
            dimension=self.dimension,
            deligne_bound=deligne_bound(self.weight, self.level),
        )

    @classmethod
    def from_table(cls, table: RelationTable) -> "RelationSystem | None":
        system = cls(table.level, table.weight, table.generators)
        if [monomial_text(m) for m in system.monomials] != table.monomials:
            logger.warning(f"cached table N={table.level} w={table.weight} has a different monomial list")
            return None
        for row in table.rows:
            system.echelon.add_row({c: Fraction(n, d) for c, n, d in row})
        system.offered = len(table.rows)
        return system


def reduce(e: CmzvExpr, system: RelationSystem) -> CmzvExpr:
    return system.reduce(e)


# ========== CACHE ==========


def table_path(level: int, weight: int, generators: Sequence[str], cache_dir: Path | None = None) -> Path:
    root = Path(cache_dir) if cache_dir is not None else get_settings().cache_dir
    tag = hashlib.sha256((TABLE_VERSION + ":" + ",".join(generators)).encode("utf-8")).hexdigest()[:12]
    return root / "relations" / f"{level}-{weight}-{tag}.json"


def save_table(system: RelationSystem, path: Path) -> Path:
    """Write the table atomically: a temporary file in the target directory, then a rename."""
    table = system.to_table()
    table.checksum = table.digest()
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.stem, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(table.model_dump_json())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.debug(f"wrote {path}")
    return path


def load_table(path: Path) -> RelationTable | None:
    """A cached table, or None when it is missing or fails its checksum."""
    if not path.exists():
        return None
    try:
        table = RelationTable.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValidationError) as e:
        logger.warning(f"cached table {path.name} is unreadable ({type(e).__name__}); regenerating")
        return None
    if table.checksum != table.digest():
        logger.warning(f"cached table {path.name} fails its checksum; regenerating")
        return None
    return table


# ========== BUILD ==========


_systems: LRUCache = LRUCache(maxsize=64)


@cached(cache=_systems, lock=RLock())
def _build(level: int, weight: int, names: tuple[str, ...], cache_dir: Path | None, use_cache: bool) -> RelationSystem:
    path = table_path(level, weight, names, cache_dir)
    if use_cache:
        table = load_table(path)
        system = RelationSystem.from_table(table) if table is not None else None
        if system is not None:
            logger.info(f"relation table N={level} w={weight} loaded from cache")
            return system
    system = RelationSystem(level, weight, names)
    system.add_all(twopi_relations(level, weight))
    for name in names:
        system.add_all(FAMILIES[name](level, weight))
    for r in range(1, weight):
        lower = _build(level, r, names, cache_dir, use_cache)
        complements = [CmzvExpr({m: 1}) for m in enumerate_monomials(level, weight - r)]
        for row in lower.row_expressions():
            system.add_all(row * m for m in complements)
    logger.info(
        f"relation table N={level} w={weight}: {system.offered} rows, rank {system.rank}, "
        f"dimension {system.dimension} (bound {deligne_bound(weight, level)})"
    )
    if use_cache:
        try:
            save_table(system, path)
        except OSError as e:
            logger.warning(f"could not write {path}: {e}")
    return system


def build_system(
    level: int,
    weight: int,
    generators: Iterable[str] = DEFAULT_GENERATORS,
    cache_dir: Path | None = None,
    use_cache: bool = True,
) -> RelationSystem:
    """All relations of the chosen families at level N and weight w, closed under products."""
    if level < 1 or weight < 1:
        raise InconsistentInput("level and weight must be positive", level=level, weight=weight)
    names = check_generators(generators)
    return _build(level, weight, names, Path(cache_dir) if cache_dir is not None else None, use_cache)


def clear_systems() -> None:
    _systems.clear()


def dimension_report(level: int, weight: int, generators: Iterable[str] | None = None, cache_dir: Path | None = None) -> DimensionReport:
    """Deligne's bound, and the computed spanning-set size when a cached table exists."""
    computed = None
    names = check_generators(generators or DEFAULT_GENERATORS)
    table = load_table(table_path(level, weight, names, cache_dir))
    if table is not None:
        computed = table.dimension
    return DimensionReport(
        level=level,
        weight=weight,
        deligne_bound=deligne_bound(weight, level),
        computed=computed,
        generators=list(names),
    )
