# app/core/numeric.py

"""
Arbitrary-precision evaluation of colored MZVs, polylogarithms, iterated integrals and
expressions, plus integer-relation detection.

Iterated integrals over [0, 1] are split at an interior point p: both halves expand as
convergent nested series (Goncharov G-functions) around 0 and around 1. When the
letters sit too close to the segment, composite Gauss-Legendre quadrature along the
deformed path takes over for the part away from 1.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from threading import RLock

import mpmath as mp
from cachetools import LRUCache, cached

from app.config import get_settings
from app.core.cyclotomic import CycNum
from app.core.errors import ConvergenceDomain, NotConvergentWord, PrecisionTooLow, Unconverged
from app.core.expr import TWOPI, BinomAtom, CmzvExpr, CmzvIndex, LogAtom, PolylogAtom, PolylogIndex, TwoPi
from app.core.quadrature import build_path, refine_all, suffix_integrals
from app.core.words import Word, word_text

logger = logging.getLogger(__name__)

SERIES_RATE = mp.mpf("0.9")
MAX_PANELS = 4096


@dataclass(frozen=True)
class EvalConfig:
    digits: int = 30
    max_terms: int = 200000
    guard_digits: int = 10
    detour_radius: Fraction = Fraction(1, 8)
    quadrature_order: int = 64

    def __post_init__(self):
        object.__setattr__(self, "detour_radius", Fraction(self.detour_radius))
        if not 0 <= self.detour_radius < Fraction(1, 2):
            raise ValueError("detour_radius must lie in [0, 1/2)")
        if self.digits < 10:
            raise ValueError("digits must be at least 10")
        if self.max_terms < 1000:
            raise ValueError("max_terms must be at least 1000")

    @classmethod
    def from_settings(cls, **overrides) -> "EvalConfig":
        settings = get_settings()
        base = cls(
            digits=settings.digits,
            max_terms=settings.max_terms,
            guard_digits=settings.guard_digits,
            detour_radius=settings.detour_radius,
            quadrature_order=settings.quadrature_order,
        )
        return replace(base, **{k: v for k, v in overrides.items() if v is not None})

    @property
    def dps(self) -> int:
        return self.digits + self.guard_digits

    @property
    def eps(self):
        return mp.mpf(10) ** (-self.dps)


@dataclass(frozen=True)
class IdentityCheck:
    passed: bool
    residual: object


# ========== NESTED SERIES ==========


def _blocks(letters: list) -> list[tuple[int, object]]:
    """Split a0..an (last nonzero) into runs 0^(m-1) c."""
    out, zeros = [], 0
    for a in letters:
        if a == 0:
            zeros += 1
        else:
            out.append((zeros + 1, a))
            zeros = 0
    if zeros:
        raise ValueError("G-function with trailing zero letters")
    return out


def nested_sum(m: list[int], y: list, rate, cfg: EvalConfig):
    """
    Li_{m1..mk}(y1..yk) with every partial product bounded by rate^n1; returns (value, bound).
    """
    k = len(m)
    if rate >= 1:
        raise Unconverged("series does not converge geometrically", rate=float(rate))
    eps = cfg.eps / 100
    terms = 1
    while True:
        bound = rate**terms * (2 + mp.log(terms)) ** (k - 1) / (1 - rate)
        if bound < eps:
            break
        terms += max(1, terms // 4)
        if terms > cfg.max_terms:
            raise Unconverged(f"nested sum needs more than {cfg.max_terms} terms", max_terms=cfg.max_terms)
    partial = [mp.mpc(0)] * k + [mp.mpc(1)]
    powers = [mp.mpc(1)] * k
    for n in range(1, terms + 1):
        for j in range(k):
            powers[j] *= y[j]
        for j in range(k):
            partial[j] += powers[j] / mp.mpf(n) ** m[j] * partial[j + 1]
    return partial[0], bound


def g_function(letters: list, z, cfg: EvalConfig):
    """G(a1..an; z) = integral from 0 to z, first letter outermost; returns (value, bound)."""
    if not letters:
        return mp.mpc(1), mp.mpf(0)
    blocks = _blocks(letters)
    m = [b[0] for b in blocks]
    cs = [b[1] for b in blocks]
    y = [z / cs[0]] + [cs[j - 1] / cs[j] for j in range(1, len(cs))]
    rate = max(abs(z) / abs(c) for c in cs)
    value, bound = nested_sum(m, y, rate, cfg)
    return (-1) ** len(blocks) * value, bound


def _split_point(poles: list) -> tuple[object, object] | None:
    """Split point p and convergence rate, or None when the series route is too slow."""
    nonzero = [abs(a) for a in poles if a != 0]
    off_one = [abs(1 - a) for a in poles if a != 1]
    m0 = min(nonzero) if nonzero else mp.mpf(1)
    m1 = min(off_one) if off_one else mp.mpf(1)
    rate = 1 / (m0 + m1)
    if rate > SERIES_RATE:
        return None
    return m0 / (m0 + m1), rate


def _series_integral(poles: list, p, cfg: EvalConfig):
    n = len(poles)
    total, err = mp.mpc(0), mp.mpf(0)
    for i in range(n + 1):
        head = [1 - a for a in reversed(poles[:i])]
        tail = poles[i:]
        left, b1 = g_function(head, 1 - p, cfg)
        right, b2 = g_function(tail, p, cfg)
        total += (-1) ** i * left * right
        err += b1 * abs(right) + b2 * abs(left)
    return total, err


def _quadrature_integral(poles: list, exact_poles: list[CycNum], cfg: EvalConfig):
    n = len(poles)
    off_one = [abs(1 - a) for a in poles if a != 1]
    m1 = min(off_one) if off_one else mp.mpf(1)
    q = 1 - m1 / 2
    finite = list({a for a in poles})
    real_inside = [
        a for a, e in zip(poles, exact_poles) if e == e.conj() and 0 < mp.re(a) < q and a != 0
    ]
    real_inside = list({a for a in real_inside})
    panels = build_path(finite, real_inside, q, cfg.detour_radius)
    coarse = suffix_integrals(poles, panels, cfg.quadrature_order, cfg.dps)
    while True:
        refined = refine_all(panels)
        fine = suffix_integrals(poles, refined, cfg.quadrature_order, cfg.dps)
        gap = max(abs(f - c) for f, c in zip(fine, coarse))
        if gap <= cfg.eps or len(refined) > MAX_PANELS:
            break
        logger.debug(f"quadrature on {len(refined)} panels moved by {mp.nstr(gap, 3)}; refining")
        panels, coarse = refined, fine
    total, err = mp.mpc(0), mp.mpf(0)
    for i in range(n + 1):
        head = [(a - 1) for a in reversed(poles[:i])]
        left, b1 = g_function(head, q - 1, cfg)
        total += (-1) ** i * left * fine[i]
        err += abs(left) * abs(fine[i] - coarse[i]) + b1 * abs(fine[i])
    return total, err


def eval_word_integral(w: Word, cfg: EvalConfig | None = None):
    """Integral over [0, 1] (upper detours around interior poles); returns (value, error estimate)."""
    cfg = cfg or EvalConfig.from_settings()
    if w and (w[0].pole == 1 or w[-1].pole == 0):
        raise NotConvergentWord(f"{word_text(w)} diverges at an end point")
    if not w:
        return mp.mpc(1), mp.mpf(0)
    exact = [x.pole for x in w]
    with mp.workdps(cfg.dps):
        poles = [e.eval_numeric(cfg.dps) for e in exact]
        poles = [mp.mpc(0) if e.is_zero() else v for e, v in zip(exact, poles)]
        poles = [mp.mpc(1) if e == 1 else v for e, v in zip(exact, poles)]
        split = _split_point(poles)
        if split is not None:
            value, err = _series_integral(poles, split[0], cfg)
            route = "series"
        else:
            value, err = _quadrature_integral(poles, exact, cfg)
            route = "quadrature"
    logger.debug(f"{word_text(w)} by {route}, error estimate {mp.nstr(err, 3)}")
    if err > mp.mpf(10) ** (1 - cfg.digits):
        raise Unconverged(f"{word_text(w)}: error estimate {mp.nstr(err, 3)} above target", route=route)
    return value, err


# ========== ATOMS ==========


def eval_cmzv(index: CmzvIndex, cfg: EvalConfig | None = None):
    """Value of a convergent colored MZV."""
    cfg = cfg or EvalConfig.from_settings()
    with mp.workdps(cfg.dps):
        if index.depth == 1 and index.a[0] == 0:
            return mp.mpc(mp.zeta(index.s[0]))
        if index.depth == 1 and index.s[0] == 1:
            return -mp.log(1 - mp.expjpi(mp.mpf(2 * index.a[0]) / index.level))
        sign, w = index.to_word()
        value, _ = eval_word_integral(w, cfg)
        return sign * value


def eval_polylog(p: PolylogIndex, cfg: EvalConfig | None = None):
    """Li_s(x) at cyclotomic arguments inside the domain of convergence."""
    cfg = cfg or EvalConfig.from_settings()
    sign, w = p.to_word()
    with mp.workdps(cfg.dps):
        value, _ = eval_word_integral(w, cfg)
        return sign * value


def _binom_integrand(n: int, cm):
    """Li_{n-1}(c x (1 - x)) / x, with 1 - 4 x (1 - x) taken as (1 - 2x)^2."""

    def f(x):
        gap = (1 - 2 * x) ** 2 if cm == 4 else 1 - cm * x * (1 - x)
        if gap == 0:
            return mp.mpf(0)
        if n == 1:
            return (1 - gap) / (gap * x)
        if n == 2:
            return -mp.log(gap) / x
        return mp.polylog(n - 1, min(1 - gap, mp.mpf(1))) / x

    return f


def eval_binom(atom: BinomAtom, cfg: EvalConfig | None = None):
    """sum_k c^k H(k) / (k^n binom(2k, k)); |c| near 4 via the integral of Li_{n-1}(c x (1 - x)) / x."""
    cfg = cfg or EvalConfig.from_settings()
    c = atom.c
    with mp.workdps(cfg.dps):
        cm = mp.re(c.eval_numeric(cfg.dps))
        rate = abs(cm) / 4
        if rate > 1 or (c == 4 and atom.n == 1):
            raise ConvergenceDomain(f"the binomial sum with c={c.to_text()}, n={atom.n} diverges", c=c.to_text(), n=atom.n)
        if rate > mp.mpf("0.75") and not atom.twist:
            value = mp.quad(_binom_integrand(atom.n, cm), [0, mp.mpf(1) / 2, 1])
            return mp.mpc(value)
        if rate >= 1:
            raise Unconverged(f"twisted binomial sum with c={c.to_text()} converges too slowly", c=c.to_text())
        r = len(atom.twist)
        # harmonic[j]: nested sum over k > n_j > ... > n_r >= 1
        harmonic = [mp.mpf(0)] * r + [mp.mpf(1)]
        total = mp.mpf(0)
        term = cm / 2
        eps = cfg.eps / 100
        for k in range(1, cfg.max_terms + 1):
            if k > 1:
                for j in range(r):
                    harmonic[j] += harmonic[j + 1] / mp.mpf(k - 1) ** atom.twist[j]
                term = term * cm * k / (2 * (2 * k - 1))
            total += term / mp.mpf(k) ** atom.n * harmonic[0]
            if k > 10 and abs(term) * (1 + mp.log(k)) ** r < eps * (1 - rate):
                return mp.mpc(total)
        raise Unconverged(f"binomial sum did not converge in {cfg.max_terms} terms", max_terms=cfg.max_terms)


_atom_cache: LRUCache = LRUCache(maxsize=8192)


@cached(cache=_atom_cache, lock=RLock())
def _eval_atom_cached(atom, cfg: EvalConfig):
    if isinstance(atom, TwoPi):
        with mp.workdps(cfg.dps):
            return mp.mpc(0, 2 * mp.pi)
    if isinstance(atom, CmzvIndex):
        return eval_cmzv(atom, cfg)
    if isinstance(atom, PolylogAtom):
        return eval_polylog(atom.index, cfg)
    if isinstance(atom, LogAtom):
        with mp.workdps(cfg.dps):
            return mp.log(atom.x.eval_numeric(cfg.dps))
    if isinstance(atom, BinomAtom):
        return eval_binom(atom, cfg)
    raise TypeError(f"cannot evaluate {atom!r}")


def eval_atom(atom, cfg: EvalConfig | None = None):
    return _eval_atom_cached(atom, cfg or EvalConfig.from_settings())


def eval_expr(e: CmzvExpr, cfg: EvalConfig | None = None):
    """Numeric value of an expression; 2PI evaluates to 2*pi*i."""
    cfg = cfg or EvalConfig.from_settings()
    with mp.workdps(cfg.dps):
        total = mp.mpc(0)
        for m, c in e.terms.items():
            term = c.eval_numeric(cfg.dps)
            for a in m:
                term *= eval_atom(a, cfg)
            total += term
        return total


def clear_cache() -> None:
    _atom_cache.clear()


# ========== RELATIONS AND IDENTITIES ==========


def pslq(values: list, cfg: EvalConfig | None = None, max_coeff: int = 10**6, max_steps: int = 10**5):
    """Integer relation among the values, verified before it is returned, or None."""
    cfg = cfg or EvalConfig.from_settings()
    need = 20 + 10 * len(values)
    if cfg.digits < need:
        raise PrecisionTooLow(f"pslq on {len(values)} values needs at least {need} digits", needed=need)
    with mp.workdps(cfg.digits):
        vals = [mp.mpc(v) for v in values]
        if all(abs(v.imag) < cfg.eps * 10**5 for v in vals):
            target = [v.real for v in vals]
        elif all(abs(v.real) < cfg.eps * 10**5 for v in vals):
            target = [v.imag for v in vals]
        else:
            target = [v.real + mp.e * v.imag for v in vals]
        rel = mp.pslq(target, maxcoeff=max_coeff, maxsteps=max_steps)
        if rel is None:
            return None
        residual = abs(mp.fsum(k * v for k, v in zip(rel, vals)))
        if residual >= mp.mpf(10) ** (10 - cfg.digits):
            logger.debug(f"pslq candidate rejected, residual {mp.nstr(residual, 3)}")
            return None
        return [int(k) for k in rel]


def verify_identity(lhs: CmzvExpr, rhs: CmzvExpr, cfg: EvalConfig | None = None) -> IdentityCheck:
    cfg = cfg or EvalConfig.from_settings()
    diff = lhs - rhs
    if diff.is_zero():
        return IdentityCheck(True, mp.mpf(0))
    residual = abs(eval_expr(diff, cfg))
    return IdentityCheck(residual < mp.mpf(10) ** (5 - cfg.digits), residual)


def twopi_value(cfg: EvalConfig):
    return eval_atom(TWOPI, cfg)
