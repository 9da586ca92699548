# app/core/expr.py

"""
Atoms and polynomial expressions over them.

CmzvIndex and TWOPI are the atoms of the colored MZV algebra. PolylogAtom, LogAtom and
BinomAtom only occur in identity records; they are evaluated numerically and, for
polylogarithms, can be converted through the catalog.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Union

from app.core.cyclotomic import ONE, ZERO, CycNum, as_cyc, lcm
from app.core.errors import Divergent, InconsistentInput
from app.core.words import Word, make_word

logger = logging.getLogger(__name__)


# ========== ATOMS ==========


@dataclass(frozen=True)
class CmzvIndex:
    """L_{s1..sk}(mu^a1, ..., mu^ak) = sum over n1 > ... > nk >= 1 of prod mu^(ai ni) / ni^si."""

    level: int
    s: tuple[int, ...]
    a: tuple[int, ...]

    def __post_init__(self):
        if not self.s or len(self.s) != len(self.a):
            raise InconsistentInput("index needs matching non-empty s and a vectors")
        if any(x < 1 for x in self.s):
            raise InconsistentInput("exponents must be positive", s=self.s)
        n = self.level
        a = tuple(int(x) % n for x in self.a)
        g = n
        for x in a:
            g = gcd(g, x)
        if g > 1:
            n //= g
            a = tuple(x // g for x in a)
        object.__setattr__(self, "level", n)
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        object.__setattr__(self, "a", a)
        if self.s[0] == 1 and a[0] == 0:
            raise Divergent(f"{self.to_text()} diverges", index=self.to_text())

    @property
    def weight(self) -> int:
        return sum(self.s)

    @property
    def depth(self) -> int:
        return len(self.s)

    def args(self) -> tuple[CycNum, ...]:
        return tuple(CycNum.mu(self.level, x) for x in self.a)

    def to_polylog(self) -> "PolylogIndex":
        return PolylogIndex(self.s, self.args())

    def to_word(self) -> tuple[int, Word]:
        return self.to_polylog().to_word()

    def sort_key(self) -> tuple:
        return (0, self.depth, self.s, tuple(Fraction(x, self.level) for x in self.a))

    def conj(self) -> tuple[int, "CmzvIndex"]:
        return 1, CmzvIndex(self.level, self.s, tuple(-x for x in self.a))

    def to_text(self) -> str:
        return f"L[{','.join(map(str, self.s))};{','.join(map(str, self.a))}]@{self.level}"

    def to_json(self, level: int | None = None) -> dict:
        level = level or self.level
        step = level // self.level
        return {"s": list(self.s), "a": [x * step for x in self.a]}

    def __repr__(self):
        return self.to_text()


class TwoPi:
    """The weight-1 atom 2*pi*i."""

    _instance = None
    weight = 1

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def sort_key(self) -> tuple:
        return (9,)

    def conj(self) -> tuple[int, "TwoPi"]:
        return -1, self

    def to_text(self) -> str:
        return "2PI"

    def to_json(self, level: int | None = None):
        return "2PI"

    def __repr__(self):
        return "TWOPI"


TWOPI = TwoPi()


@dataclass(frozen=True)
class PolylogIndex:
    """Li_{s1..sk}(x1..xk) = sum over n1 > ... > nk >= 1 of prod xi^ni / ni^si."""

    s: tuple[int, ...]
    x: tuple[CycNum, ...]

    def __post_init__(self):
        if not self.s or len(self.s) != len(self.x):
            raise InconsistentInput("polylog index needs matching non-empty s and x vectors")
        object.__setattr__(self, "x", tuple(as_cyc(v) for v in self.x))

    @property
    def weight(self) -> int:
        return sum(self.s)

    @property
    def depth(self) -> int:
        return len(self.s)

    def to_text(self) -> str:
        return f"Li[{','.join(map(str, self.s))}](" + ",".join(v.to_text() for v in self.x) + ")"

    def letters(self) -> tuple[CycNum, ...]:
        """Poles a_i = (x_1 ... x_i)^-1 of the iterated-integral form."""
        out, prod = [], ONE
        for v in self.x:
            prod = prod * v
            out.append(prod.inverse())
        return tuple(out)

    def to_word(self) -> tuple[int, Word]:
        """(sign, word) with Li = sign * integral over [0, 1] of the word."""
        poles: list = []
        for s, a in zip(self.s, self.letters()):
            poles.extend([ZERO] * (s - 1))
            poles.append(a)
        return (-1) ** self.depth, make_word(*poles)


@dataclass(frozen=True)
class PolylogAtom:
    index: PolylogIndex

    @property
    def weight(self) -> int:
        return self.index.weight

    def sort_key(self) -> tuple:
        return (1, self.index.depth, self.index.s, tuple(v.sort_key() for v in self.index.x))

    def conj(self) -> tuple[int, "PolylogAtom"]:
        return 1, PolylogAtom(PolylogIndex(self.index.s, tuple(v.conj() for v in self.index.x)))

    def to_text(self) -> str:
        return self.index.to_text()

    def to_json(self, level: int | None = None) -> dict:
        return {"li": {"s": list(self.index.s), "x": [v.to_text() for v in self.index.x]}}


@dataclass(frozen=True)
class LogAtom:
    """Principal logarithm of a nonzero cyclotomic number."""

    x: CycNum
    weight: int = field(default=1, init=False)

    def sort_key(self) -> tuple:
        return (2, self.x.sort_key())

    def conj(self) -> tuple[int, "LogAtom"]:
        return 1, LogAtom(self.x.conj())

    def to_text(self) -> str:
        return f"log({self.x.to_text()})"

    def to_json(self, level: int | None = None) -> dict:
        return {"log": self.x.to_text()}


@dataclass(frozen=True)
class BinomAtom:
    """sum_k c^k H_twist(k) / (k^n binom(2k, k)), H the strictly nested harmonic sum; c real."""

    c: CycNum
    n: int
    twist: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "c", as_cyc(self.c))
        if self.c != self.c.conj():
            raise InconsistentInput(f"binomial parameter {self.c.to_text()} is not real", c=self.c.to_text())

    @property
    def weight(self) -> int:
        return self.n + sum(self.twist)

    def sort_key(self) -> tuple:
        return (3, self.n, self.twist, self.c.sort_key())

    def conj(self) -> tuple[int, "BinomAtom"]:
        return 1, self

    def to_text(self) -> str:
        twist = ";".join(map(str, self.twist))
        return f"binom[{self.c.to_text()},{self.n},{twist}]"

    def to_json(self, level: int | None = None) -> dict:
        return {"binom": {"c": self.c.to_text(), "n": self.n, "twist": list(self.twist)}}


Atom = Union[CmzvIndex, TwoPi, PolylogAtom, LogAtom, BinomAtom]
Monomial = tuple  # atoms sorted by descending key


def monomial(atoms) -> Monomial:
    return tuple(sorted(atoms, key=lambda x: x.sort_key(), reverse=True))


def monomial_weight(m: Monomial) -> int:
    return sum(x.weight for x in m)


def monomial_key(m: Monomial) -> tuple:
    return tuple(x.sort_key() for x in m)


def monomial_text(m: Monomial) -> str:
    return "*".join(x.to_text() for x in m) if m else "1"


# ========== EXPRESSIONS ==========


class CmzvExpr:
    """Polynomial in atoms with cyclotomic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict[Monomial, CycNum] = {}
        for m, c in (terms or {}).items():
            key = monomial(m)
            c = as_cyc(c)
            clean[key] = clean[key] + c if key in clean else c
        self.terms = {m: c for m, c in clean.items() if not c.is_zero()}

    @classmethod
    def _raw(cls, terms: dict) -> "CmzvExpr":
        out = cls.__new__(cls)
        out.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        return out

    @classmethod
    def zero(cls) -> "CmzvExpr":
        return cls._raw({})

    @classmethod
    def one(cls) -> "CmzvExpr":
        return cls._raw({(): ONE})

    @classmethod
    def constant(cls, c) -> "CmzvExpr":
        return cls._raw({(): as_cyc(c)})

    @classmethod
    def atom(cls, a, coeff=1) -> "CmzvExpr":
        return cls._raw({(a,): as_cyc(coeff)})

    @staticmethod
    def coerce(x) -> "CmzvExpr":
        if isinstance(x, CmzvExpr):
            return x
        if isinstance(x, (int, Fraction, CycNum)):
            return CmzvExpr.constant(x)
        if isinstance(x, (CmzvIndex, TwoPi, PolylogAtom, LogAtom, BinomAtom)):
            return CmzvExpr.atom(x)
        raise TypeError(f"cannot interpret {x!r} as an expression")

    # ---------- access ----------

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: (monomial_weight(kv[0]), monomial_key(kv[0]))))

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: Monomial) -> CycNum:
        return self.terms.get(monomial(m), ZERO)

    def atoms(self) -> set:
        return {a for m in self.terms for a in m}

    def weights(self) -> set[int]:
        return {monomial_weight(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def weight(self) -> int | None:
        ws = self.weights()
        return next(iter(ws)) if len(ws) == 1 else None

    def homogeneous(self, weight: int) -> "CmzvExpr":
        return CmzvExpr._raw({m: c for m, c in self.terms.items() if monomial_weight(m) == weight})

    def level(self) -> int:
        n = 1
        for a in self.atoms():
            if isinstance(a, CmzvIndex):
                n = lcm(n, a.level)
        return n

    def is_cmzv(self) -> bool:
        return all(isinstance(a, (CmzvIndex, TwoPi)) for a in self.atoms())

    # ---------- arithmetic ----------

    def __add__(self, other):
        try:
            o = CmzvExpr.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self.terms)
        for m, c in o.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return CmzvExpr._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return CmzvExpr._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            o = CmzvExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return CmzvExpr.coerce(other) - self

    def scale(self, k) -> "CmzvExpr":
        k = as_cyc(k)
        if k.is_zero():
            return CmzvExpr.zero()
        return CmzvExpr._raw({m: c * k for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        try:
            o = CmzvExpr.coerce(other)
        except TypeError:
            return NotImplemented
        acc: dict[Monomial, CycNum] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = monomial(m1 + m2) if m1 and m2 else (m1 or m2)
                c = c1 * c2
                acc[m] = acc[m] + c if m in acc else c
        return CmzvExpr._raw(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(as_cyc(other).inverse())
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = CmzvExpr.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = CmzvExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    # ---------- transformations ----------

    def substitute(self, mapping) -> "CmzvExpr":
        """Replace atoms by expressions; mapping is a callable returning None to keep an atom."""
        out = CmzvExpr.zero()
        for m, c in self.terms.items():
            term = CmzvExpr.constant(c)
            for a in m:
                repl = mapping(a)
                term = term * (CmzvExpr.atom(a) if repl is None else repl)
            out = out + term
        return out

    def conj(self) -> "CmzvExpr":
        """Complex conjugate, assuming every atom conjugates atom-wise."""
        acc: dict[Monomial, CycNum] = {}
        for m, c in self.terms.items():
            sign = 1
            atoms = []
            for a in m:
                s, b = a.conj()
                sign *= s
                atoms.append(b)
            key = monomial(atoms)
            val = c.conj() * sign
            acc[key] = acc[key] + val if key in acc else val
        return CmzvExpr._raw(acc)

    def real_part(self) -> "CmzvExpr":
        return (self + self.conj()).scale(Fraction(1, 2))

    # ---------- output ----------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self:
            ct = c.to_text()
            if not m:
                parts.append(f"({ct})")
            elif ct == "1":
                parts.append(monomial_text(m))
            else:
                parts.append(f"({ct})*{monomial_text(m)}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        level = self.level()
        return {
            "level": level,
            "terms": [{"coeff": c.to_text(), "atoms": [a.to_json(level) for a in m]} for m, c in self],
        }

    def __repr__(self):
        return f"CmzvExpr({self.to_text()})"


def zeta(*s: int) -> CmzvExpr:
    return CmzvExpr.atom(CmzvIndex(1, tuple(s), (0,) * len(s)))


def cmzv(level: int, s, a) -> CmzvExpr:
    return CmzvExpr.atom(CmzvIndex(level, tuple(s), tuple(a)))


def pi_expr() -> CmzvExpr:
    """pi = 2*pi*i * (-i/2)."""
    return CmzvExpr.atom(TWOPI, CycNum.mu(4).scale(Fraction(-1, 2)))
