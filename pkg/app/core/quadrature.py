# app/core/quadrature.py

"""
Composite Gauss-Legendre evaluation of iterated integrals along a deformed path.

The path runs along the real axis from 0 and passes above every real pole by a
semicircle. Nested antiderivatives are carried across panels with the spectral
integration matrix of the Gauss-Legendre rule.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from threading import RLock

import mpmath as mp
from cachetools import LRUCache, cached

from app.core.errors import PathThroughPole, Unconverged

logger = logging.getLogger(__name__)


@cached(cache=LRUCache(maxsize=16), lock=RLock())
def gauss_legendre(order: int, dps: int) -> tuple[tuple, tuple]:
    """Nodes and weights on [-1, 1] by Newton iteration on the Legendre recurrence."""
    with mp.workdps(dps + 10):
        eps = mp.mpf(10) ** (-dps - 5)
        nodes, weights = [], []
        for i in range(1, order + 1):
            x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (order + mp.mpf(1) / 2))
            for _ in range(200):
                p0, p1 = mp.mpf(1), x
                for k in range(2, order + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = order * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            p0, p1 = mp.mpf(1), x
            for k in range(2, order + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = order * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        pairs = sorted(zip(nodes, weights))
        return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)


def _legendre_table(xs, top: int) -> list[list]:
    """P_m(x) for m = 0..top at each x."""
    table = []
    for x in xs:
        row = [mp.mpf(1), x]
        for k in range(2, top + 1):
            row.append(((2 * k - 1) * x * row[-1] - (k - 1) * row[-2]) / k)
        table.append(row)
    return table


@cached(cache=LRUCache(maxsize=16), lock=RLock())
def integration_matrix(order: int, dps: int) -> tuple[tuple, ...]:
    """S[i][k] with sum_k S[i][k] f(x_k) = integral of f from -1 to x_i."""
    nodes, weights = gauss_legendre(order, dps)
    with mp.workdps(dps + 10):
        table = _legendre_table(nodes, order)
        rows = []
        for i, xi in enumerate(nodes):
            pi = table[i]
            row = []
            for k, wk in enumerate(weights):
                pk = table[k]
                acc = (xi + 1) / 2
                for m in range(1, order):
                    acc += pk[m] * (pi[m + 1] - pi[m - 1]) / 2
                row.append(wk * acc)
            rows.append(tuple(row))
        return tuple(rows)


@dataclass(frozen=True)
class Panel:
    """A straight segment a -> b, or an arc center + radius * exp(i theta), theta0 -> theta1."""

    kind: str
    a: object = None
    b: object = None
    center: object = None
    radius: object = None
    theta0: object = None
    theta1: object = None

    @classmethod
    def segment(cls, a, b) -> "Panel":
        return cls("segment", a=mp.mpc(a), b=mp.mpc(b))

    @classmethod
    def arc(cls, center, radius, theta0, theta1) -> "Panel":
        return cls("arc", center=mp.mpc(center), radius=mp.mpf(radius), theta0=mp.mpf(theta0), theta1=mp.mpf(theta1))

    def length(self):
        if self.kind == "segment":
            return abs(self.b - self.a)
        return self.radius * abs(self.theta1 - self.theta0)

    def bisect(self) -> tuple["Panel", "Panel"]:
        if self.kind == "segment":
            mid = (self.a + self.b) / 2
            return Panel.segment(self.a, mid), Panel.segment(mid, self.b)
        mid = (self.theta0 + self.theta1) / 2
        return (
            Panel.arc(self.center, self.radius, self.theta0, mid),
            Panel.arc(self.center, self.radius, mid, self.theta1),
        )

    def distance(self, p):
        if self.kind == "segment":
            d = self.b - self.a
            t = mp.re((p - self.a) * mp.conj(d)) / (abs(d) ** 2)
            t = min(max(t, 0), 1)
            return abs(p - (self.a + t * d))
        rel = p - self.center
        ang = mp.arg(rel) if rel != 0 else mp.mpf(0)
        lo, hi = sorted((self.theta0, self.theta1))
        ends = [abs(p - (self.center + self.radius * mp.expj(th))) for th in (self.theta0, self.theta1)]
        if rel != 0 and lo <= ang <= hi:
            return min([abs(abs(rel) - self.radius)] + ends)
        return min(ends)

    def samples(self, nodes) -> list[tuple]:
        """(t(x), t'(x)) at the given nodes of [-1, 1]."""
        out = []
        if self.kind == "segment":
            half = (self.b - self.a) / 2
            for x in nodes:
                out.append((self.a + half * (x + 1), half))
            return out
        half = (self.theta1 - self.theta0) / 2
        for x in nodes:
            th = self.theta0 + half * (x + 1)
            e = mp.expj(th)
            out.append((self.center + self.radius * e, 1j * self.radius * e * half))
        return out


def build_path(poles: list, real_poles: list, end, detour_radius: Fraction | str, max_panels: int = 4096) -> list[Panel]:
    """
    Panels from 0 to end, passing above each real pole in (0, end).

    poles are all finite poles (complex); real_poles are those on the open segment.
    """
    radius = Fraction(detour_radius)
    radius = mp.mpf(radius.numerator) / radius.denominator
    interior = sorted(mp.mpf(mp.re(p)) for p in real_poles)
    stops = []
    for c in interior:
        others = [abs(c - q) for q in poles if abs(c - q) > 0] + [abs(c), abs(end - c)]
        r = min([radius] + [g / 3 for g in others])
        if r <= 0:
            raise PathThroughPole(f"cannot detour around the pole at {mp.nstr(c, 8)}")
        stops.append((c, r))
    panels: list[Panel] = []
    cursor = mp.mpc(0)
    for c, r in stops:
        panels.append(Panel.segment(cursor, c - r))
        for k in range(4):
            panels.append(Panel.arc(c, r, mp.pi * (4 - k) / 4, mp.pi * (3 - k) / 4))
        cursor = mp.mpc(c + r)
    panels.append(Panel.segment(cursor, end))
    refined: list[Panel] = []
    work = list(reversed(panels))
    active = [p for p in poles if p != 0]
    while work:
        panel = work.pop()
        size = panel.length()
        if any(panel.distance(p) < 2 * size for p in active):
            left, right = panel.bisect()
            work.append(right)
            work.append(left)
            if len(refined) + len(work) > max_panels:
                raise Unconverged("path subdivision exceeded the panel cap", max_panels=max_panels)
            continue
        refined.append(panel)
    return refined


def suffix_integrals(letters: list, panels: list[Panel], order: int, dps: int) -> list:
    """
    Integrals from 0 to the end of the path of every suffix letters[j:], j = 0..n.

    letters are pole values (mpc); the first letter is the outermost form.
    """
    nodes, weights = gauss_legendre(order, dps)
    smat = integration_matrix(order, dps)
    n = len(letters)
    values = [mp.mpc(0)] * n + [mp.mpc(1)]
    for panel in panels:
        pts = panel.samples(nodes)
        inner = [mp.mpc(1)] * order
        for j in range(n - 1, -1, -1):
            c = letters[j]
            f = [dt / (t - c) * g for (t, dt), g in zip(pts, inner)]
            start = values[j]
            values[j] = start + mp.fsum(w * fk for w, fk in zip(weights, f))
            inner = [start + mp.fsum(s * fk for s, fk in zip(row, f)) for row in smat]
    return values


def refine_all(panels: list[Panel]) -> list[Panel]:
    out: list[Panel] = []
    for p in panels:
        out.extend(p.bisect())
    return out
