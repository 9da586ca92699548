# app/core/geometry.py

"""
Mobius transformations and rational self-maps of the Riemann sphere over cyclotomic
fields: preimages relative to a candidate support, pullback of the forms w(a),
support symmetry groups and unital-function checks.
"""

import logging
from collections import deque
from dataclasses import dataclass
from itertools import permutations
from threading import RLock
from typing import Iterable, Sequence

from cachetools import LRUCache, cached

from app.core.cyclotomic import INFINITY, ONE, ZERO, CycNum, ExtPoint, as_cyc, is_infinite
from app.core.errors import ConstantResult, DegenerateTriple, DivisionByZero, DoesNotSplit
from app.core.words import WordPoly

logger = logging.getLogger(__name__)

Poly = tuple[CycNum, ...]  # lowest degree first


# ========== POLYNOMIALS ==========


def poly_trim(p: Iterable) -> Poly:
    out = [as_cyc(c) for c in p]
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def poly_deg(p: Poly) -> int:
    return len(p) - 1


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly_trim((p[k] if k < len(p) else ZERO) + (q[k] if k < len(q) else ZERO) for k in range(n))


def poly_scale(p: Poly, c) -> Poly:
    return poly_trim(x * c for x in p)


def poly_sub(p: Poly, q: Poly) -> Poly:
    return poly_add(p, poly_scale(q, -1))


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x.is_zero():
            continue
        for j, y in enumerate(q):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return poly_trim(out)


def poly_pow(p: Poly, k: int) -> Poly:
    out: Poly = (ONE,)
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise DivisionByZero("polynomial division by zero")
    rem = list(p)
    quot = [ZERO] * max(len(p) - len(q) + 1, 1)
    inv = q[-1].inverse()
    while len(rem) >= len(q) and rem:
        k = len(rem) - len(q)
        f = rem[-1] * inv
        quot[k] = f
        for j, y in enumerate(q):
            rem[k + j] = rem[k + j] - f * y
        rem = list(poly_trim(rem))
    return poly_trim(quot), tuple(rem)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd."""
    a, b = poly_trim(p), poly_trim(q)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return ()
    return poly_scale(a, a[-1].inverse())


def poly_eval(p: Poly, x: CycNum) -> CycNum:
    out = ZERO
    for c in reversed(p):
        out = out * x + c
    return out


def linear_factor(s: CycNum) -> Poly:
    return (-s, ONE)


def poly_text(p: Poly) -> list[str]:
    return [c.to_text() for c in p] if p else ["0"]


# ========== MOBIUS MAPS ==========


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d), normalized so the first nonzero entry is 1."""

    a: CycNum
    b: CycNum
    c: CycNum
    d: CycNum

    @classmethod
    def create(cls, a, b, c, d) -> "MobiusMap":
        a, b, c, d = (as_cyc(x) for x in (a, b, c, d))
        if (a * d - b * c).is_zero():
            raise DegenerateTriple("Mobius matrix is singular")
        lead = next(x for x in (a, b, c, d) if not x.is_zero())
        inv = lead.inverse()
        return cls(a * inv, b * inv, c * inv, d * inv)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(ONE, ZERO, ZERO, ONE)

    def __call__(self, z: ExtPoint) -> ExtPoint:
        if is_infinite(z):
            return INFINITY if self.c.is_zero() else self.a / self.c
        den = self.c * z + self.d
        if den.is_zero():
            return INFINITY
        return (self.a * z + self.b) / den

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other."""
        return MobiusMap.create(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap.create(self.d, -self.b, -self.c, self.a)

    def to_rational(self) -> "RationalMap":
        return RationalMap.create((self.b, self.a), (self.d, self.c))

    def to_text(self) -> str:
        return f"({self.a.to_text()})*z + ({self.b.to_text()}) / (({self.c.to_text()})*z + ({self.d.to_text()}))"

    def __repr__(self):
        return f"MobiusMap({self.to_text()})"


def _to_standard(p0: ExtPoint, p1: ExtPoint, pinf: ExtPoint) -> MobiusMap:
    """The map sending p0, p1, pinf to 0, 1, infinity."""
    if is_infinite(p0):
        return MobiusMap.create(0, p1 - pinf, 1, -pinf)
    if is_infinite(p1):
        return MobiusMap.create(1, -p0, 1, -pinf)
    if is_infinite(pinf):
        return MobiusMap.create(1, -p0, 0, p1 - p0)
    return MobiusMap.create(p1 - pinf, -p0 * (p1 - pinf), p1 - p0, -pinf * (p1 - p0))


def _distinct(points: Sequence[ExtPoint]) -> bool:
    return all(points[i] != points[j] for i in range(len(points)) for j in range(i + 1, len(points)))


def mobius_from_triple(p: Sequence[ExtPoint], q: Sequence[ExtPoint]) -> MobiusMap:
    """The unique Mobius map with R(p_i) = q_i."""
    if len(p) != 3 or len(q) != 3 or not _distinct(p) or not _distinct(q):
        raise DegenerateTriple("triples must consist of three distinct points")
    return _to_standard(*q).inverse().compose(_to_standard(*p))


# ========== RATIONAL MAPS ==========


@dataclass(frozen=True)
class RationalMap:
    """num(x) / den(x) with coprime polynomials and monic denominator."""

    num: Poly
    den: Poly

    @classmethod
    def create(cls, num: Iterable, den: Iterable) -> "RationalMap":
        num, den = poly_trim(num), poly_trim(den)
        if not den:
            raise DivisionByZero("rational map with zero denominator")
        g = poly_gcd(num, den) if num else den
        if poly_deg(g) > 0:
            num, den = poly_divmod(num, g)[0], poly_divmod(den, g)[0]
        inv = den[-1].inverse()
        num, den = poly_scale(num, inv), poly_scale(den, inv)
        if max(len(num), len(den)) <= 1:
            raise ConstantResult("rational map is constant", value=(num[0].to_text() if num else "0"))
        return cls(num, den)

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls((ZERO, ONE), (ONE,))

    @classmethod
    def from_divisor(cls, zeros, poles, one_at: ExtPoint) -> "RationalMap":
        """
        K * prod (x - z)^m / prod (x - p)^m normalized by R(one_at) = 1.

        zeros and poles are sequences of (point, multiplicity); points at infinity only
        contribute through the degree difference.
        """
        num: Poly = (ONE,)
        den: Poly = (ONE,)
        for z, m in zeros:
            if not is_infinite(z):
                num = poly_mul(num, poly_pow(linear_factor(z), m))
        for p, m in poles:
            if not is_infinite(p):
                den = poly_mul(den, poly_pow(linear_factor(p), m))
        base = cls.create(num, den)
        value = base(one_at)
        if is_infinite(value) or value.is_zero():
            raise ConstantResult("normalizing point is a zero or pole of the divisor")
        return cls.create(poly_scale(base.num, value.inverse()), base.den)

    @property
    def degree(self) -> int:
        return max(poly_deg(self.num), poly_deg(self.den))

    def __call__(self, z: ExtPoint) -> ExtPoint:
        if is_infinite(z):
            dn, dd = poly_deg(self.num), poly_deg(self.den)
            if dn > dd:
                return INFINITY
            if dn < dd:
                return ZERO
            return self.num[-1] / self.den[-1]
        den = poly_eval(self.den, z)
        if den.is_zero():
            return INFINITY
        return poly_eval(self.num, z) / den

    def preimage_multiset(self, v: ExtPoint, candidates: Iterable[ExtPoint]) -> list[ExtPoint]:
        """R^-1(v) with multiplicity, found by trial division against the candidates."""
        target = self.den if is_infinite(v) else poly_sub(self.num, poly_scale(self.den, v))
        out: list[ExtPoint] = [INFINITY] * (self.degree - poly_deg(target))
        rest = target
        for s in candidates:
            if is_infinite(s):
                continue
            while poly_deg(rest) > 0 and poly_eval(rest, s).is_zero():
                rest = poly_divmod(rest, linear_factor(s))[0]
                out.append(s)
        if poly_deg(rest) > 0:
            raise DoesNotSplit(
                f"R - ({v.to_text()}) does not split over the candidate set",
                remaining=poly_text(rest),
            )
        return out

    def pullback_letter(self, a: ExtPoint, candidates: Iterable[ExtPoint]) -> WordPoly:
        """R^* w(a) = sum w(R^-1 a) - sum w(R^-1 inf)."""
        candidates = list(candidates)
        if is_infinite(a):
            return WordPoly.zero()
        out = WordPoly.zero()
        for s in self.preimage_multiset(a, candidates):
            out = out + WordPoly.letter(s)
        for s in self.preimage_multiset(INFINITY, candidates):
            out = out - WordPoly.letter(s)
        return out

    def compose_mobius(self, m: MobiusMap) -> "RationalMap":
        """m after self."""
        return RationalMap.create(
            poly_add(poly_scale(self.num, m.a), poly_scale(self.den, m.b)),
            poly_add(poly_scale(self.num, m.c), poly_scale(self.den, m.d)),
        )

    def precompose_mobius(self, m: MobiusMap) -> "RationalMap":
        """self after m, by homogenizing in (a z + b, c z + d)."""
        n = self.degree
        top, bottom = (m.b, m.a), (m.d, m.c)

        def homogenize(p: Poly) -> Poly:
            out: Poly = ()
            for k, coeff in enumerate(p):
                term = poly_mul(poly_pow(poly_trim(top), k), poly_pow(poly_trim(bottom), n - k))
                out = poly_add(out, poly_scale(term, coeff))
            return out

        return RationalMap.create(homogenize(self.num), homogenize(self.den))

    def __add__(self, other: "RationalMap") -> "RationalMap":
        return RationalMap.create(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den),
        )

    def to_json(self) -> dict:
        return {"numerator": poly_text(self.num), "denominator": poly_text(self.den)}

    def to_text(self) -> str:
        return f"[{', '.join(poly_text(self.num))}] / [{', '.join(poly_text(self.den))}]"

    def __repr__(self):
        return f"RationalMap({self.to_text()})"


def as_rational(r) -> RationalMap:
    return r.to_rational() if isinstance(r, MobiusMap) else r


# ========== SUPPORTS ==========


def level_support(n: int) -> list[ExtPoint]:
    """{0, inf, 1, mu, ..., mu^(n-1)}."""
    return [ZERO, INFINITY] + [CycNum.mu(n, k) for k in range(n)]


def sort_points(points: Iterable[ExtPoint]) -> list[ExtPoint]:
    unique: list[ExtPoint] = []
    for p in points:
        if p not in unique:
            unique.append(p)
    return sorted(unique, key=lambda p: p.sort_key())


def image_support(r, support: Iterable[ExtPoint]) -> list[ExtPoint]:
    return sort_points(r(s) for s in support)


def check_closed(r, support: Iterable[ExtPoint]) -> bool:
    """True iff R^-1(R(S)) is contained in S."""
    rm = as_rational(r)
    pts = list(support)
    for s in pts:
        try:
            rm.preimage_multiset(rm(s), pts)
        except DoesNotSplit:
            logger.debug(f"closure fails at {s.to_text()}")
            return False
    return True


@cached(cache=LRUCache(maxsize=64), lock=RLock())
def _symmetry_group(support: frozenset) -> tuple[MobiusMap, ...]:
    pts = sort_points(support)
    base = pts[:3]
    found: list[MobiusMap] = []
    for triple in permutations(pts, 3):
        g = mobius_from_triple(base, triple)
        if all(g(p) in support for p in pts):
            found.append(g)
    logger.debug(f"symmetry group of {len(pts)} points has order {len(found)}")
    return tuple(found)


def symmetry_group(support: Iterable[ExtPoint]) -> list[MobiusMap]:
    """All Mobius maps permuting the support, by enumerating images of a fixed triple."""
    s = frozenset(support)
    if len(s) < 3:
        raise DegenerateTriple("a support needs at least three points")
    return list(_symmetry_group(s))


def is_unital(r, level: int) -> bool:
    """Fibers over 0, 1 and infinity lie in the level support."""
    rm = as_rational(r)
    support = level_support(level)
    try:
        for v in (ZERO, ONE, INFINITY):
            rm.preimage_multiset(v, support)
    except DoesNotSplit:
        return False
    if rm.degree > level:
        logger.warning(f"unital map of degree {rm.degree} exceeds the bound {level}")
    return True


def complete_edges(support: Iterable[ExtPoint], edges: Iterable[tuple[ExtPoint, ExtPoint]]) -> bool:
    """Orbit graph of the edges covers the support and is connected."""
    pts = sort_points(support)
    edges = list(edges)
    if not edges:
        return False
    adjacency: dict = {p: set() for p in pts}
    for g in symmetry_group(pts):
        for t, s in edges:
            u, v = g(t), g(s)
            adjacency[u].add(v)
            adjacency[v].add(u)
    covered = {p for p, nb in adjacency.items() if nb}
    if len(covered) != len(pts):
        return False
    seen = {pts[0]}
    queue = deque([pts[0]])
    while queue:
        for nb in adjacency[queue.popleft()]:
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == len(pts)


def invariant_map(group: Iterable[MobiusMap], r0: MobiusMap) -> RationalMap:
    """sum over sigma in H of R0 after sigma."""
    total: RationalMap | None = None
    base = r0.to_rational()
    for sigma in group:
        term = base.precompose_mobius(sigma)
        if total is None:
            total = term
            continue
        try:
            total = total + term
        except ConstantResult as e:
            raise ConstantResult("invariant sum degenerates to a constant") from e
    if total is None:
        raise ConstantResult("empty group")
    return total
