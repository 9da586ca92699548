# app/core/cyclotomic.py

"""
Exact arithmetic in cyclotomic fields Q(mu_N).

A CycNum stores its coordinates in the power basis of mu_N = exp(2 pi i / N),
reduced modulo the N-th cyclotomic polynomial. Mixed-level operations embed both
operands into the lcm level first.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from threading import RLock
from typing import Union

import mpmath as mp
import sympy
from cachetools import LRUCache, cached

from app.core.errors import DegenerateTuple, DivisionByZero, LevelCapExceeded, NotDivisible

logger = logging.getLogger(__name__)

_level_cap = 240


def set_level_cap(cap: int) -> None:
    global _level_cap
    _level_cap = cap


def get_level_cap() -> int:
    return _level_cap


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@cached(cache=LRUCache(maxsize=1024), lock=RLock())
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    t = sympy.Symbol("t")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, t), t)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def totient(n: int) -> int:
    return len(cyclotomic_coeffs(n)) - 1


def _check_level(n: int) -> None:
    if n > _level_cap:
        raise LevelCapExceeded(f"level {n} exceeds the configured cap {_level_cap}", level=n)


def _reduce(coeffs: list, n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_coeffs(n)
    d = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for k in range(len(c) - 1, d - 1, -1):
        lead = c[k]
        if lead:
            shift = k - d
            for j in range(d):
                if phi[j]:
                    c[shift + j] -= lead * phi[j]
    c = c[:d]
    c.extend([Fraction(0)] * (d - len(c)))
    return tuple(c)


def _lift_exponents(coeffs: tuple[Fraction, ...], step: int, n: int) -> tuple[Fraction, ...]:
    """Substitute t -> t^step and reduce at level n."""
    out = [Fraction(0)] * ((len(coeffs) - 1) * step + 1)
    for k, c in enumerate(coeffs):
        if c:
            out[k * step] = c
    return _reduce(out, n)


@cached(cache=LRUCache(maxsize=256), lock=RLock())
def _descent_transform(m: int, n: int):
    """
    Row-reduction data for writing a level-n vector in the image of level m.
    Returns (T, pivots) with T @ A = identity on the pivot rows of the embedding A.
    """
    dm, dn = totient(m), totient(n)
    step = n // m
    cols = [_lift_exponents(tuple(Fraction(int(i == j)) for i in range(dm)), step, n) for j in range(dm)]
    # augmented rows: [A | I]
    rows = [[cols[j][i] for j in range(dm)] + [Fraction(int(i == k)) for k in range(dn)] for i in range(dn)]
    r = 0
    for c in range(dm):
        piv = next((i for i in range(r, dn) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(dn):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return tuple(tuple(row[dm:]) for row in rows), dm


@dataclass(frozen=True, eq=False)
class CycNum:
    level: int
    coeffs: tuple[Fraction, ...]

    # ---------- construction ----------

    @classmethod
    def from_poly(cls, level: int, coeffs) -> "CycNum":
        _check_level(level)
        reduced = _reduce(list(coeffs), level)
        if len(reduced) == 1:
            return cls(1, reduced)
        return cls(level, reduced)

    @classmethod
    def rational(cls, q) -> "CycNum":
        return cls(1, (Fraction(q),))

    @classmethod
    def mu(cls, n: int, k: int = 1) -> "CycNum":
        """The root of unity mu_n^k."""
        if n < 1:
            raise ValueError("level must be positive")
        k %= n
        return cls.from_poly(n, [0] * k + [1])

    # ---------- predicates ----------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return len(self.coeffs) == 1 or self.canonical.level == 1

    def as_fraction(self) -> Fraction | None:
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        c = self.canonical
        return c.coeffs[0] if c.level == 1 else None

    # ---------- level handling ----------

    def embed(self, target_level: int) -> "CycNum":
        if target_level % self.level:
            raise NotDivisible(f"level {self.level} does not divide {target_level}")
        if target_level == self.level or len(self.coeffs) == 1:
            return self
        _check_level(target_level)
        return CycNum(target_level, _lift_exponents(self.coeffs, target_level // self.level, target_level))

    def coeffs_at(self, level: int) -> tuple[Fraction, ...]:
        """Coordinates of this element at a multiple of its level."""
        if len(self.coeffs) == 1:
            return (self.coeffs[0],) + (Fraction(0),) * (totient(level) - 1)
        return self.embed(level).coeffs

    @cached_property
    def canonical(self) -> "CycNum":
        """The same element expressed at its minimal level."""
        if len(self.coeffs) == 1:
            return self
        n = self.level
        for m in sympy.divisors(n):
            if m == n:
                break
            transform, rank = _descent_transform(m, n)
            u = [sum((t * v for t, v in zip(row, self.coeffs) if t and v), Fraction(0)) for row in transform]
            if all(x == 0 for x in u[rank:]):
                if rank == 1:
                    return CycNum(1, (u[0],))
                return CycNum(m, tuple(u[:rank]))
        return self

    @cached_property
    def canonical_key(self) -> tuple:
        c = self.canonical
        return (c.level, c.coeffs)

    def sort_key(self) -> tuple:
        level, coeffs = self.canonical_key
        return (0, level, coeffs)

    # ---------- arithmetic ----------

    @staticmethod
    def _coerce(other) -> "CycNum | None":
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum(1, (Fraction(other),))
        return None

    @staticmethod
    def _align(x: "CycNum", y: "CycNum") -> tuple[int, tuple, tuple]:
        if x.level == y.level:
            return x.level, x.coeffs, y.coeffs
        n = lcm(x.level, y.level)
        _check_level(n)
        return n, x.coeffs_at(n), y.coeffs_at(n)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(self.coeffs) == 1 and len(o.coeffs) == 1:
            return CycNum(1, (self.coeffs[0] + o.coeffs[0],))
        if len(o.coeffs) == 1:
            return CycNum(self.level, (self.coeffs[0] + o.coeffs[0],) + self.coeffs[1:])
        if len(self.coeffs) == 1:
            return CycNum(o.level, (o.coeffs[0] + self.coeffs[0],) + o.coeffs[1:])
        n, a, b = self._align(self, o)
        return CycNum(n, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.level, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, q: Fraction) -> "CycNum":
        return CycNum(self.level, tuple(x * q for x in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.coeffs) == 1:
            return self.scale(o.coeffs[0])
        if len(self.coeffs) == 1:
            return o.scale(self.coeffs[0])
        n, a, b = self._align(self, o)
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycNum(n, _reduce(prod, n))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise DivisionByZero("division by zero in cyclotomic field")
        if len(self.coeffs) == 1:
            return CycNum(1, (1 / self.coeffs[0],))
        return _inverse(self.level, self.coeffs)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = CycNum(1, (Fraction(1),))
        for _ in range(abs(k)):
            result = result * base
        return result

    def conj(self) -> "CycNum":
        """Complex conjugation, mu^k -> mu^-k."""
        if len(self.coeffs) == 1:
            return self
        n = self.level
        out = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            if c:
                out[(-k) % n] += c
        return CycNum(n, _reduce(out, n))

    # ---------- comparison ----------

    def __eq__(self, other):
        if isinstance(other, Infinity):
            return False
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(self.coeffs) == 1 and len(o.coeffs) == 1:
            return self.coeffs[0] == o.coeffs[0]
        _, a, b = self._align(self, o)
        return a == b

    def __hash__(self):
        return hash(self.canonical_key)

    # ---------- special values ----------

    def root_of_unity(self) -> tuple[int, int] | None:
        """Return (n, k) with self == mu_n^k, n the minimal order, or None."""
        c = self.canonical
        n = c.level if c.level % 2 == 0 else 2 * c.level
        for k in range(n):
            if CycNum.mu(n, k) == c:
                g = gcd(k, n)
                return n // g, k // g
        return None

    def eval_numeric(self, digits: int):
        """Complex value with |error| <= 10^(1-digits)."""
        with mp.workdps(digits + 10):
            total = mp.mpc(0)
            for k, c in enumerate(self.coeffs):
                if c:
                    term = mp.mpf(c.numerator) / c.denominator
                    total += term if k == 0 else term * mp.expjpi(mp.mpf(2 * k) / self.level)
            return total

    def to_text(self) -> str:
        c = self.canonical
        if c.level == 1:
            return _fraction_text(c.coeffs[0])
        parts = []
        for k, q in enumerate(c.coeffs):
            if not q:
                continue
            mono = "" if k == 0 else (f"mu({c.level})" if k == 1 else f"mu({c.level})^{k}")
            if not mono:
                body = _fraction_text(abs(q))
            elif abs(q) == 1:
                body = mono
            else:
                body = f"{_fraction_text(abs(q))}*{mono}"
            if not parts:
                parts.append(body if q > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if q > 0 else f"- {body}")
        return " ".join(parts) if parts else "0"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"CycNum({self.to_text()!r})"


def _fraction_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@cached(cache=LRUCache(maxsize=4096), lock=RLock())
def _inverse(level: int, coeffs: tuple[Fraction, ...]) -> CycNum:
    t = sympy.Symbol("t")
    num = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t, domain=sympy.QQ)
    mod = sympy.Poly(list(reversed(cyclotomic_coeffs(level))), t, domain=sympy.QQ)
    inv = num.invert(mod)
    out = [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in reversed(inv.all_coeffs())]
    return CycNum.from_poly(level, out)


class Infinity:
    """The point at infinity of the extended complex plane."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("inf")

    def sort_key(self) -> tuple:
        return (1,)

    def to_text(self) -> str:
        return "inf"

    def __repr__(self):
        return "INFINITY"

    __str__ = to_text


INFINITY = Infinity()
ExtPoint = Union[CycNum, Infinity]

ZERO = CycNum.rational(0)
ONE = CycNum.rational(1)
I = CycNum.mu(4)


def is_infinite(p) -> bool:
    return isinstance(p, Infinity)


def as_cyc(x) -> CycNum:
    if isinstance(x, CycNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycNum.rational(x)
    raise TypeError(f"cannot interpret {x!r} as a cyclotomic number")


def embed(x: CycNum, target_level: int) -> CycNum:
    return x.embed(target_level)


def field_arith(x: CycNum, y: CycNum | None, op: str) -> CycNum:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    if op == "conj":
        return x.conj()
    raise ValueError(f"unknown field operation {op!r}")


def eval_numeric(x: ExtPoint, digits: int):
    if is_infinite(x):
        return mp.inf
    return x.eval_numeric(digits)


# ========== SQUARE ROOTS OF RATIONALS ==========


def _sqrt_prime(p: int) -> CycNum:
    if p == 2:
        return CycNum.mu(8, 1) + CycNum.mu(8, 7)
    gauss = CycNum.from_poly(p, [0] + [sympy.legendre_symbol(a, p) for a in range(1, p)])
    return gauss if p % 4 == 1 else -I * gauss


def sqrt_rational(q) -> CycNum:
    """Principal square root of a rational number, via quadratic Gauss sums."""
    q = Fraction(q)
    if q == 0:
        return ZERO
    n = abs(q.numerator * q.denominator)
    result = CycNum.rational(Fraction(1, q.denominator))
    for p, e in sympy.factorint(n).items():
        result = result * Fraction(p ** (e // 2))
        if e % 2:
            result = result * _sqrt_prime(int(p))
    return result * I if q < 0 else result


def cross_ratio(z1: ExtPoint, z2: ExtPoint, z3: ExtPoint, z4: ExtPoint) -> CycNum:
    """(z3 - z1)(z4 - z2) / ((z3 - z2)(z4 - z1)), factors containing infinity dropped."""
    pts = [z1, z2, z3, z4]
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i] == pts[j]:
                raise DegenerateTuple("cross-ratio of coincident points", points=(i, j))

    def factor(a, b):
        return ONE if is_infinite(a) or is_infinite(b) else a - b

    return factor(z3, z1) * factor(z4, z2) / (factor(z3, z2) * factor(z4, z1))
