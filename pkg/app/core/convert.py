# app/core/convert.py

"""
Conversion of iterated integrals and polylogarithms into colored MZVs.

A catalog entry supplies a Mobius map R sending the level-N support S onto a support
containing the poles of interest. The segment [0, 1] is pulled back to a path in S from
R^-1(0) to R^-1(1), which is replaced by a chain of standard edges g(0, 1) with g in the
symmetry group of S. The generating series of that chain,

    L = C(v_m) E_m ... C(v_1) E_1 C(v_0),

is built from the regularized base series over [0, 1], whose coefficients are colored
MZVs, and from corner factors exp(A_j w(v_j)). The corner constants are fixed by
matching the weight-1 coefficients of L with the known logarithms along the path.
"""

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from threading import RLock

import mpmath as mp
from cachetools import LRUCache, cached
from sympy import primefactors

from app.core.catalog import CatalogEntry, load_catalog
from app.core.cyclotomic import INFINITY, ONE, ZERO, CycNum, ExtPoint, I, as_cyc, is_infinite, lcm, sqrt_rational
from app.core.errors import (
    AlphaNotCyclotomic,
    ConvergenceDomain,
    Divergent,
    DivergentWord,
    EndpointMismatch,
    InconsistentInput,
    InconsistentLinearTerms,
    LevelCapExceeded,
    NoCatalogEntry,
    NonUnitaryPole,
    NotConnected,
    NotConvergentWord,
    RoundingAmbiguous,
    UnderdeterminedSystem,
    UnsupportedPole,
)
from app.core.expr import TWOPI, BinomAtom, CmzvExpr, CmzvIndex, PolylogAtom, PolylogIndex
from app.core.geometry import MobiusMap, level_support, sort_points, symmetry_group
from app.core.grouplike import (
    SYMBOLIC,
    GroupLikeSeries,
    exp_letter,
    regularized_lift,
    series_inverse,
    series_product,
    substitute,
)
from app.core.linalg import SparseEchelon
from app.core.numeric import EvalConfig, eval_expr
from app.core.words import Letter, Word, WordPoly, as_poly, letter, word_text

logger = logging.getLogger(__name__)

# Precision of the numeric checks that fix branches of weight-1 constants.
BRANCH_DIGITS = 20
BRANCH_TOL = mp.mpf(10) ** -12


# ========== WORDS AND INDICES ==========


def _modulus_at_most_one(z: CycNum) -> bool:
    if z.root_of_unity() is not None:
        return True
    with mp.workdps(30):
        return abs(z.eval_numeric(30)) <= 1 + mp.mpf(10) ** -25


def index_to_word(p: PolylogIndex) -> tuple[int, Word]:
    """Li_s(x) = sign * integral over [0, 1] of w(0)^(s1-1) w(a1) ... w(0)^(sk-1) w(ak)."""
    if p.s[0] == 1 and p.x[0] == ONE:
        raise Divergent(f"{p.to_text()} diverges", index=p.to_text())
    prod = ONE
    for v in p.x:
        if v.is_zero():
            raise InconsistentInput(f"{p.to_text()} has a zero argument")
        prod = prod * v
        if not _modulus_at_most_one(prod):
            raise Divergent(f"{p.to_text()} lies outside the domain of convergence", index=p.to_text())
    return p.to_word()


def _exponent(pole: ExtPoint, level: int) -> int:
    """k with pole = mu_level^k."""
    root = None if is_infinite(pole) else pole.root_of_unity()
    if root is None or level % root[0]:
        raise NonUnitaryPole(f"{pole.to_text()} is not a root of unity of order dividing {level}")
    n, k = root
    return k * (level // n) % level


def word_to_index(w: Word) -> tuple[int, CmzvIndex]:
    """Inverse of index_to_word on words over zero and roots of unity."""
    if not w:
        raise InconsistentInput("the empty word has no index")
    if w[0].pole == ONE or (not w[-1].is_infinite() and w[-1].pole.is_zero()):
        raise NotConvergentWord(f"{word_text(w)} is not convergent")
    level = 1
    for x in w:
        if x.is_infinite():
            raise NonUnitaryPole(f"{word_text(w)} contains w(inf)")
        if x.pole.is_zero():
            continue
        root = x.pole.root_of_unity()
        if root is None:
            raise NonUnitaryPole(f"{x.to_text()} is not a root of unity", word=word_text(w))
        level = lcm(level, root[0])
    s: list[int] = []
    args: list[int] = []
    zeros, previous = 0, 0
    for x in w:
        if x.pole.is_zero():
            zeros += 1
            continue
        e = _exponent(x.pole, level)
        s.append(zeros + 1)
        args.append(previous - e)
        previous, zeros = e, 0
    return (-1) ** len(s), CmzvIndex(level, tuple(s), tuple(args))


def word_atom(w: Word) -> CmzvExpr:
    sign, index = word_to_index(w)
    return CmzvExpr.atom(index, sign)


def is_unitary_word(w: Word) -> bool:
    return all(
        not x.is_infinite() and (x.pole.is_zero() or x.pole.root_of_unity() is not None) for x in w
    )


def normalize_weight_one(e: CmzvExpr) -> CmzvExpr:
    """Rewrite L1(mu^k) with k/N > 1/2 as L1(mu^(N-k)) + (1/2 - k/N) 2PI."""

    def swap(atom):
        if isinstance(atom, CmzvIndex) and atom.s == (1,) and 2 * atom.a[0] > atom.level:
            n, k = atom.level, atom.a[0]
            return CmzvExpr.atom(CmzvIndex(n, (1,), (n - k,))) + CmzvExpr.atom(TWOPI, Fraction(1, 2) - Fraction(k, n))
        return None

    return e.substitute(swap)


# ========== SERIES ==========


def level_alphabet(level: int) -> frozenset[Letter]:
    return frozenset(letter(p) for p in level_support(level) if not is_infinite(p))


@cached(cache=LRUCache(maxsize=32), lock=RLock())
def base_series(level: int, weight: int) -> GroupLikeSeries:
    """Regularized series of [0, 1] over the level-N alphabet; coefficients are CMZV atoms."""
    return regularized_lift(word_atom, letter(ONE), letter(ZERO), level_alphabet(level), weight, SYMBOLIC)


def edge_series(g: MobiusMap, level: int, weight: int) -> GroupLikeSeries:
    """Series of the path g([0, 1]): the base series pulled back along w(s) -> w(g^-1 s) - w(g^-1 inf)."""
    base = base_series(level, weight)
    ginv = g.inverse()
    tail = ginv(INFINITY)

    def phi(x: Letter) -> WordPoly:
        return WordPoly.letter(ginv(x.pole)) - WordPoly.letter(tail)

    return substitute(base, phi, base.alphabet)


def corner_series(vertex: ExtPoint, value: CmzvExpr, alphabet: frozenset[Letter], weight: int) -> GroupLikeSeries:
    """exp(A w(v)); at infinity every finite letter has residue -1, so the exponent is A times their sum."""
    letters = alphabet if is_infinite(vertex) else letter(vertex)
    return exp_letter(value, letters, alphabet, weight, SYMBOLIC)


# ========== CHAINS ==========


@dataclass(frozen=True)
class ChainStep:
    """The standard edge g(0, 1), traversed backwards when reverse is set."""

    g: MobiusMap
    reverse: bool = False

    @property
    def source(self) -> ExtPoint:
        return self.g(ONE) if self.reverse else self.g(ZERO)

    @property
    def target(self) -> ExtPoint:
        return self.g(ZERO) if self.reverse else self.g(ONE)

    def series(self, level: int, weight: int) -> GroupLikeSeries:
        e = edge_series(self.g, level, weight)
        return series_inverse(e) if self.reverse else e

    def to_text(self) -> str:
        return f"{self.source.to_text()} -> {self.target.to_text()}"


@cached(cache=LRUCache(maxsize=32), lock=RLock())
def _orbit_steps(support: frozenset) -> dict:
    """Adjacency of the orbit graph of (0, 1); forward edges take precedence."""
    steps: dict = {}
    group = symmetry_group(support)
    for reverse in (False, True):
        for g in group:
            step = ChainStep(g, reverse)
            steps.setdefault(step.source, {}).setdefault(step.target, step)
    return {p: [nb[q] for q in sort_points(nb)] for p, nb in steps.items()}


def _bfs(adjacency: dict, start: ExtPoint, end: ExtPoint) -> list[ChainStep]:
    if start == end:
        return []
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for step in adjacency.get(p, []):
            q = step.target
            if q in parent:
                continue
            parent[q] = step
            if q == end:
                out = []
                while parent[q] is not None:
                    out.append(parent[q])
                    q = parent[q].source
                return list(reversed(out))
            queue.append(q)
    raise NotConnected(f"no chain of standard edges joins {start.to_text()} and {end.to_text()}")


def plan_chain(support, start: ExtPoint, end: ExtPoint, via: ExtPoint | None = None) -> list[ChainStep]:
    """Shortest chain of oriented standard edges from start to end, optionally through via."""
    pts = frozenset(support)
    for p in (start, end) + (() if via is None else (via,)):
        if p not in pts:
            raise EndpointMismatch(f"{p.to_text()} is not in the support")
    adjacency = _orbit_steps(pts)
    if via is not None and via != start and via != end:
        return _bfs(adjacency, start, via) + _bfs(adjacency, via, end)
    return _bfs(adjacency, start, end)


def _route(p0: ExtPoint, p1: ExtPoint, pinf: ExtPoint, level: int) -> ExtPoint | None:
    """
    Intermediate vertex making the chain homotopic to R^-1 of [0, 1] with its detours above
    the real axis, or None for the direct edge.
    """
    finite_root = lambda p: not is_infinite(p) and not p.is_zero()  # noqa: E731
    if finite_root(p0) and finite_root(p1):
        if is_infinite(pinf):
            return ZERO
        if pinf.is_zero():
            return INFINITY
        a, b, c = (_exponent(p, level) for p in (p0, p1, pinf))
        ccw = (c - a) % level > (b - a) % level
        inside = ((b - a) if ccw else (a - b)) % level - 1
        if inside == 0 or ccw:
            return ZERO
        return INFINITY
    if {is_infinite(p0), is_infinite(p1)} == {True, False} and (p0 == ZERO or p1 == ZERO):
        j = _exponent(pinf, level)
        if level % 2 == 0:
            return CycNum.mu(level, j + level // 2)
        k = (j + (level + 1) // 2) % level
        return None if k == j else CycNum.mu(level, k)
    return None


# ========== PLANS ==========


@dataclass
class ConversionPlan:
    """A chain of standard edges realizing R^-1([0, 1]) and, once solved, its corner constants."""

    level: int
    transform: MobiusMap
    support: tuple
    steps: tuple[ChainStep, ...]
    constants: tuple[CmzvExpr, ...] | None = None
    entry_id: str = ""
    _assembled: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def start(self) -> ExtPoint:
        return self.transform.inverse()(ZERO)

    @property
    def end(self) -> ExtPoint:
        return self.transform.inverse()(ONE)

    @property
    def pole(self) -> ExtPoint:
        return self.transform.inverse()(INFINITY)

    @property
    def vertices(self) -> list[ExtPoint]:
        if not self.steps:
            return [self.start]
        return [self.steps[0].source] + [s.target for s in self.steps]

    @property
    def image(self) -> list[ExtPoint]:
        return sort_points(self.transform(s) for s in self.support)

    @property
    def alphabet(self) -> frozenset[Letter]:
        return level_alphabet(self.level)

    @property
    def solved(self) -> bool:
        return self.constants is not None

    def series(self, weight: int) -> GroupLikeSeries:
        """The assembled series L truncated at the given weight."""
        if not self.solved:
            raise UnderdeterminedSystem("corner constants have not been solved")
        if weight not in self._assembled:
            alphabet = self.alphabet
            vertices = self.vertices
            factors = [corner_series(vertices[-1], self.constants[-1], alphabet, weight)]
            for j in reversed(range(len(self.steps))):
                factors.append(self.steps[j].series(self.level, weight))
                factors.append(corner_series(vertices[j], self.constants[j], alphabet, weight))
            self._assembled[weight] = series_product(*factors)
        return self._assembled[weight]

    def describe(self) -> dict:
        return {
            "entry": self.entry_id,
            "level": self.level,
            "chain": [s.to_text() for s in self.steps],
            "corners": [
                {"vertex": v.to_text(), "constant": None if self.constants is None else self.constants[j].to_text()}
                for j, v in enumerate(self.vertices)
            ],
        }


def make_plan(level: int, transform: MobiusMap, via: ExtPoint | None = None, route: bool = True, entry_id: str = "") -> ConversionPlan:
    """Plan the chain for R^-1([0, 1]); via overrides the automatic routing."""
    support = tuple(level_support(level))
    inverse = transform.inverse()
    p0, p1, pinf = inverse(ZERO), inverse(ONE), inverse(INFINITY)
    for p in (p0, p1):
        if p not in support:
            raise EndpointMismatch(f"R^-1 sends an end point to {p.to_text()}, outside the level-{level} support")
    if via is None and route:
        via = _route(p0, p1, pinf, level)
    steps = plan_chain(support, p0, p1, via)
    plan = ConversionPlan(level, transform, support, tuple(steps), entry_id=entry_id)
    logger.info(f"plan {entry_id or 'ad hoc'}: {' | '.join(s.to_text() for s in steps)}")
    return plan


# ========== CORNER CONSTANTS ==========


def _log_difference(a: CycNum, b: CycNum, level: int) -> CmzvExpr:
    """log(a - b) modulo 2PI: log(mu^i - mu^j) = log(1 - mu^(j-i)) + log(mu^i) = -L1(mu^(j-i)) + ..."""
    if a.is_zero() or b.is_zero():
        return CmzvExpr.zero()
    i, j = _exponent(a, level), _exponent(b, level)
    return -CmzvExpr.atom(CmzvIndex(level, (1,), (j - i,)))


def _log_factors(plan: ConversionPlan, s: ExtPoint) -> list[tuple[int, ExtPoint, ExtPoint]]:
    """
    log((R(s) - 1) / R(s)) - log((R(inf) - 1) / R(inf)) as signed logarithms of differences,
    terms for R(s) or R(inf) in {0, 1, inf} omitted and factors containing infinity dropped.
    """
    p0, p1, pinf = plan.start, plan.end, plan.pole
    terms = []
    if s != p0 and s != p1 and s != pinf:
        terms += [(1, s, p1), (1, p0, pinf), (-1, s, p0), (-1, p1, pinf)]
    if not any(is_infinite(p) for p in (p0, p1, pinf)):
        terms += [(-1, p0, pinf), (1, p1, pinf)]
    return [(k, a, b) for k, a, b in terms if not is_infinite(a) and not is_infinite(b)]


def regularized_log(b: ExtPoint, dps: int):
    """Regularized integral of w(b) over [0, 1], passing above a pole in (0, 1)."""
    if is_infinite(b) or b.is_zero() or b == ONE:
        return mp.mpc(0)
    v = b.eval_numeric(dps)
    if b == b.conj() and 0 < v.real < 1:
        return mp.log((1 - v) / v) - mp.mpc(0, mp.pi)
    return mp.log((v - 1) / v)


def round_twopi(value, bound: int) -> Fraction:
    """value / (2 pi i) as a rational with denominator at most bound."""
    t = value / mp.mpc(0, 2 * mp.pi)
    if abs(t.imag) > BRANCH_TOL:
        raise RoundingAmbiguous(f"2PI coefficient is not real: {mp.nstr(t, 10)}")
    q = Fraction(mp.nstr(t.real, BRANCH_DIGITS, strip_zeros=False)).limit_denominator(bound)
    if abs(t.real - mp.mpf(q.numerator) / q.denominator) > BRANCH_TOL:
        raise RoundingAmbiguous(f"2PI coefficient {mp.nstr(t.real, 15)} has no denominator <= {bound}")
    return q


def linear_term(plan: ConversionPlan, s: CycNum, cfg: EvalConfig) -> CmzvExpr:
    """Exact regularized integral of w(s) along the planned path."""
    part = CmzvExpr.zero()
    for k, a, b in _log_factors(plan, s):
        part = part + _log_difference(a, b, plan.level).scale(k)
    with mp.workdps(cfg.dps):
        target = regularized_log(plan.transform(s), cfg.dps) - regularized_log(plan.transform(INFINITY), cfg.dps)
        q = round_twopi(target - eval_expr(part, cfg), 2 * plan.level)
    return part + CmzvExpr.atom(TWOPI, q)


def solve_corner_constants(plan: ConversionPlan, cfg: EvalConfig | None = None) -> ConversionPlan:
    """Fix every corner constant by matching the weight-1 coefficients of L."""
    cfg = cfg or EvalConfig.from_settings(digits=BRANCH_DIGITS)
    vertices = plan.vertices
    edges = [step.series(plan.level, 1) for step in plan.steps]
    echelon = SparseEchelon()
    residuals: list[tuple[ExtPoint, CmzvExpr]] = []
    for s in plan.support:
        if is_infinite(s):
            continue
        x = (letter(s),)
        rhs = linear_term(plan, s, cfg)
        for e in edges:
            rhs = rhs - e[x]
        row: dict = {j: Fraction(1) for j, v in enumerate(vertices) if v == s or is_infinite(v)}
        row[-1] = -rhs
        reduced = echelon.reduce(row)
        if not reduced:
            continue
        if set(reduced) == {-1}:
            residuals.append((s, reduced[-1]))
            continue
        echelon.add_row(reduced)
    for s, r in residuals:
        value = eval_expr(r, cfg)
        if abs(value) > BRANCH_TOL:
            raise InconsistentLinearTerms(
                f"weight-1 coefficient at {s.to_text()} is off by {mp.nstr(value, 8)}",
                letter=s.to_text(),
            )
    constants = []
    for j, v in enumerate(vertices):
        row = echelon.rows.get(j)
        if row is None or any(c not in (j, -1) for c in row):
            raise UnderdeterminedSystem(f"corner constant at {v.to_text()} is not determined", vertex=v.to_text())
        constants.append(-row[-1] if -1 in row else CmzvExpr.zero())
    solved = replace(plan, constants=tuple(constants), _assembled={})
    logger.info(f"corner constants for {plan.entry_id or 'ad hoc'}: " + ", ".join(c.to_text() for c in constants))
    return solved


# ========== CONVERSION ==========


def _pullback(plan: ConversionPlan, pole: ExtPoint) -> WordPoly:
    return plan.transform.to_rational().pullback_letter(pole, plan.support)


def convert_word(plan: ConversionPlan, w: Word) -> CmzvExpr:
    """Integral over [0, 1] of a convergent word over R(S) as a colored MZV expression."""
    w = tuple(w)
    if not w:
        return CmzvExpr.one()
    image = plan.image
    for x in w:
        if x.is_infinite() or x.pole not in image:
            raise UnsupportedPole(f"{x.to_text()} is not in the image support", pole=x.to_text())
    if w[0].pole == ONE or w[-1].pole.is_zero():
        raise DivergentWord(f"{word_text(w)} is not convergent")
    pulled = WordPoly.one()
    cache: dict = {}
    for x in w:
        if x not in cache:
            cache[x] = _pullback(plan, x.pole)
        pulled = pulled * cache[x]
    value = plan.series(len(w)).coeff_poly(pulled)
    logger.debug(f"{word_text(w)} -> {len(pulled)} pulled-back words")
    return normalize_weight_one(value)


# ========== FACES ==========


def _edge_points(step: ChainStep, count: int = 64) -> list | None:
    """Samples of the edge from its source to its target; None when it runs through infinity."""
    g = step.g
    with mp.workdps(15):
        pole = g.inverse()(INFINITY)
        if not is_infinite(pole):
            t = pole.eval_numeric(15)
            if abs(t.imag) < 1e-9 and -1e-9 <= t.real <= 1 + 1e-9:
                return None
        a, b, c, d = (x.eval_numeric(15) for x in (g.a, g.b, g.c, g.d))
        out = [(a * t + b) / (c * t + d) for t in (mp.mpf(k) / count for k in range(count + 1))]
    return out[::-1] if step.reverse else out


def _winding(loop: list, q) -> int:
    with mp.workdps(15):
        total = mp.fsum(mp.arg((z1 - q) / (z0 - q)) for z0, z1 in zip(loop, loop[1:] + loop[:1]))
        return int(mp.nint(total / (2 * mp.pi)))


@cached(cache=LRUCache(maxsize=16), lock=RLock())
def face_plans(level: int) -> tuple[tuple[ConversionPlan, ConversionPlan], ...]:
    """
    Solved (direct, detour) plans: a forward standard edge p0 -> p1 and the chain p0 -> v -> p1,
    for every triangle of finite vertices whose interior holds no point of the support.
    """
    support = tuple(level_support(level))
    adjacency = _orbit_steps(frozenset(support))
    step_of = {(s.source, s.target): s for steps in adjacency.values() for s in steps}
    finite = sort_points(p for p in support if not is_infinite(p))
    seen: set = set()
    out = []
    for p0 in finite:
        for p1 in finite:
            direct = step_of.get((p0, p1))
            if direct is None or direct.reverse:
                continue
            for v in finite:
                face = frozenset((p0, v, p1))
                first, second = step_of.get((p0, v)), step_of.get((v, p1))
                if len(face) < 3 or face in seen or first is None or second is None:
                    continue
                edges = [_edge_points(s) for s in (first, second, direct)]
                if any(e is None for e in edges):
                    continue
                loop = edges[0][:-1] + edges[1][:-1] + edges[2][::-1][:-1]
                if any(_winding(loop, q.eval_numeric(15)) for q in finite if q not in face):
                    continue
                seen.add(face)
                name = f"face {p0.to_text()} {v.to_text()} {p1.to_text()}"
                transform = direct.g.inverse()
                out.append(
                    tuple(
                        solve_corner_constants(ConversionPlan(level, transform, support, steps, entry_id=name))
                        for steps in ((direct,), (first, second))
                    )
                )
    logger.debug(f"level {level}: {len(out)} empty triangular faces")
    return tuple(out)


def find_entry(poles, catalog: list[CatalogEntry] | None = None, level: int | None = None) -> CatalogEntry:
    """First Mobius catalog entry whose image support holds every pole."""
    catalog = load_catalog() if catalog is None else catalog
    needed = [p for p in poles]
    for entry in catalog:
        if entry.kind != "mobius" or (level is not None and entry.level != level):
            continue
        if all(p in entry.image for p in needed):
            return entry
    raise NoCatalogEntry(
        "no catalog entry covers the poles " + ", ".join(p.to_text() for p in sort_points(needed)),
        poles=[p.to_text() for p in sort_points(needed)],
    )


@cached(cache=LRUCache(maxsize=64), lock=RLock())
def plan_for_entry(entry: CatalogEntry) -> ConversionPlan:
    return solve_corner_constants(make_plan(entry.level, entry.transform, entry_id=entry.id))


def convert_integral(p, catalog: list[CatalogEntry] | None = None, level: int | None = None) -> CmzvExpr:
    """Integral over [0, 1] of a word or word polynomial."""
    poly = as_poly(p)
    if all(is_unitary_word(w) for w, _ in poly):
        out = CmzvExpr.zero()
        for w, c in poly:
            out = out + (word_atom(w) if w else CmzvExpr.one()).scale(c)
        return normalize_weight_one(out)
    poles = {x.pole for w, _ in poly for x in w}
    plan = plan_for_entry(find_entry(poles, catalog, level))
    out = CmzvExpr.zero()
    for w, c in poly:
        out = out + convert_word(plan, w).scale(c)
    return out


def convert_polylog(p: PolylogIndex, catalog: list[CatalogEntry] | None = None, level: int | None = None) -> CmzvExpr:
    sign, w = index_to_word(p)
    return convert_integral(w, catalog, level).scale(sign)


# ========== CENTRAL BINOMIAL SUMS ==========


def _real_sqrt(q: CycNum, dps: int) -> CycNum | None:
    """
    sqrt(q) for a positive real q as a rational combination of square roots of divisors of
    2N, recognized numerically and confirmed exactly.
    """
    primes = primefactors(2 * q.canonical.level)
    radicands, roots = [], []
    for k in range(len(primes) + 1):
        for chosen in combinations(primes, k):
            m = 1
            for p in chosen:
                m *= p
            try:
                roots.append(sqrt_rational(m))
            except LevelCapExceeded:
                continue
            radicands.append(m)
    with mp.workdps(dps):
        target = mp.sqrt(mp.re(q.eval_numeric(dps)))
        rel = mp.pslq([target] + [mp.sqrt(m) for m in radicands], maxcoeff=10**6, maxsteps=10**5)
    if rel is None or rel[0] == 0:
        return None
    root = ZERO
    for r, k in zip(roots, rel[1:]):
        if k:
            root = root + r.scale(Fraction(-k, rel[0]))
    return root if root * root == q else None


def binomial_alpha(c) -> CycNum:
    """The root alpha of c x (1 - x) = 1 with the smaller real part; c rational or real quadratic."""
    c = as_cyc(c)
    if c != c.conj():
        raise AlphaNotCyclotomic(f"c = {c.to_text()} is not real")
    q = c.as_fraction()
    if q is not None:
        if q == 0 or abs(q) > 4:
            raise ConvergenceDomain(f"the sum converges only for 0 < |c| <= 4, got {q}", c=str(q))
        try:
            root = sqrt_rational(1 - 4 / q)
        except LevelCapExceeded as exc:
            raise AlphaNotCyclotomic(f"sqrt(1 - 4/c) needs a field beyond the level cap for c = {q}") from exc
        return (ONE - root) * Fraction(1, 2)
    with mp.workdps(BRANCH_DIGITS):
        value = mp.re(c.eval_numeric(BRANCH_DIGITS))
        if abs(value) > 4:
            raise ConvergenceDomain(f"the sum converges only for 0 < |c| <= 4, got {c.to_text()}", c=c.to_text())
    d = ONE - c.inverse().scale(Fraction(4))
    positive = mp.re(d.eval_numeric(BRANCH_DIGITS)) > 0
    root = _real_sqrt(d if positive else -d, 2 * BRANCH_DIGITS)
    if root is None:
        raise AlphaNotCyclotomic(f"sqrt(1 - 4/c) is not a sum of square roots of rationals for c = {c.to_text()}")
    return (ONE - (root if positive else root * I)) * Fraction(1, 2)


def binomial_sum_word(c, n: int, twist=()) -> tuple[int, WordPoly]:
    """
    sum_k c^k H_twist(k) / (k^n binom(2k, k)) as sign * the integral of
    w(0) w0^(n-2) w1 w0^(s1-1) w1 ... w0^(sr-1) w1, with w0 = w(0) + w(1) and
    w1 = w(alpha) + w(1 - alpha).
    """
    twist = tuple(int(s) for s in twist)
    if n < 2:
        raise ConvergenceDomain(f"binomial sums need n >= 2, got {n}", n=n)
    if any(s < 1 for s in twist):
        raise InconsistentInput("twist exponents must be positive", twist=twist)
    alpha = binomial_alpha(c)
    w0 = WordPoly.letter(ZERO) + WordPoly.letter(ONE)
    w1 = WordPoly.letter(alpha) + WordPoly.letter(ONE - alpha)
    poly = WordPoly.letter(ZERO)
    for _ in range(n - 2):
        poly = poly * w0
    poly = poly * w1
    for s in twist:
        for _ in range(s - 1):
            poly = poly * w0
        poly = poly * w1
    return (-1) ** (len(twist) + 1), poly


def convert_binomial(c, n: int, twist=(), catalog: list[CatalogEntry] | None = None, level: int | None = None) -> CmzvExpr:
    """Central binomial sum as a colored MZV expression; c = 4 takes the real part of the upper path."""
    q = as_cyc(c).as_fraction()
    if q == 4 and twist:
        raise ConvergenceDomain("twisted sums at c = 4 are not supported", c="4")
    sign, poly = binomial_sum_word(c, n, twist)
    value = convert_integral(poly, catalog, level).scale(sign)
    if q == 4:
        value = normalize_weight_one(value.real_part())
    logger.info(f"binomial sum c={as_cyc(c).to_text()}, n={n}, twist={list(twist)}: {len(value)} terms")
    return value


def convert_expr(e: CmzvExpr, catalog: list[CatalogEntry] | None = None) -> CmzvExpr:
    """Replace polylogarithm and binomial-sum atoms by their colored MZV expressions."""

    def mapping(atom):
        if isinstance(atom, PolylogAtom):
            return convert_polylog(atom.index, catalog)
        if isinstance(atom, BinomAtom):
            return convert_binomial(atom.c, atom.n, atom.twist, catalog)
        return None

    return e.substitute(mapping)
