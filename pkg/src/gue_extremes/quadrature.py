"""Gauss-Legendre rules and truncated half-line domains."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .specfun import hermite_arrays


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple[float, float] = (-1.0, 1.0)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values):
        return float(np.dot(self.weights, values))


def gauss_legendre(m: int) -> QuadratureRule:
    """m-point Gauss-Legendre rule on (-1, 1) by Newton iteration on P_m."""
    if not 1 <= m <= 2048:
        raise ValueError(f"node count must be in [1, 2048], got {m}")
    k = np.arange(1, m + 1)
    # Tricomi initial guess, descending order
    x = np.cos(np.pi * (k - 0.25) / (m + 0.5)) * (1 - (m - 1) / (8.0 * m**3))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, m + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        if m == 1:
            p0, p1 = np.ones_like(x), x.copy()
        dp = m * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, m + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = m * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x = x[::-1].copy()
    w = w[::-1].copy()
    # exact symmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(x, w, (-1.0, 1.0))


def map_to_interval(rule: QuadratureRule, lo: float, hi: float) -> QuadratureRule:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("interval ends must be finite")
    if lo >= hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    a, b = rule.domain
    scale = (hi - lo) / (b - a)
    return QuadratureRule(lo + (rule.nodes - a) * scale, rule.weights * scale, (lo, hi))


def composite(lo, hi, panels, m):
    """Composite Gauss-Legendre rule with `panels` equal panels of m nodes."""
    edges = np.linspace(lo, hi, panels + 1)
    base = gauss_legendre(m)
    nodes = np.concatenate([map_to_interval(base, a, b).nodes for a, b in zip(edges[:-1], edges[1:])])
    weights = np.concatenate([map_to_interval(base, a, b).weights for a, b in zip(edges[:-1], edges[1:])])
    return QuadratureRule(nodes, weights, (float(lo), float(hi)))


# ---------------------------------------------------------------- decay


@dataclass(frozen=True)
class AiryTail:
    """Tail of the Airy-kernel diagonal, K(s,s) ~ exp(-4/3 s^{3/2}) / (8 pi s).

    ``bound(s) = exp(-4/3 s^{3/2}) s / (16 pi sqrt(s))`` overestimates the
    tail mass beyond s by a factor s^2.
    """

    def bound(self, s):
        return math.exp(-4.0 / 3.0 * s**1.5) * s / (16.0 * math.pi * math.sqrt(s)) if s > 0 else math.inf

    def cutoff(self, tol):
        return brentq(lambda s: self.bound(s) - tol, 0.5, 50.0, xtol=1e-12)


@dataclass(frozen=True)
class GaussianTail:
    """Tail of the edge-scaled Hermite kernel diagonal for finite n.

    The tail mass beyond s is estimated by K(s,s) / r(s) with
    r = -d/ds log K(s,s), an upper bound once log K is concave, which holds
    beyond the spectral edge.
    """

    n: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def diagonal(self, s):
        n = self.n
        c = 2**-0.5 * n ** (-1.0 / 6.0)
        lam = math.sqrt(2.0 * n) + c * np.atleast_1d(np.asarray(s, dtype=float))
        phi, dphi = hermite_arrays(n, lam)
        return c * 0.5 * (dphi**2 + (2 * n + 1 - lam**2) * phi**2 - phi**2)

    def bound(self, s):
        h = 1e-3
        k0, k1, k2 = self.diagonal(np.array([s - h, s, s + h]))
        if k1 <= 0.0:
            return 0.0
        if k0 <= 0.0 or k2 <= 0.0:
            return k1
        rate = -(math.log(k2) - math.log(k0)) / (2 * h)
        if rate <= 0:
            return math.inf
        return k1 / rate

    def cutoff(self, tol):
        if tol in self._cache:
            return self._cache[tol]
        # past the edge the diagonal is decreasing: scan, then refine
        s = 0.0
        while self.bound(s) > tol:
            s += 0.5
            if s > 200:
                raise RuntimeError("GaussianTail cutoff search did not terminate")
        lo = max(s - 0.5, 0.0)
        if lo < s and self.bound(lo) > tol:
            s = brentq(lambda v: math.log(self.bound(v)) - math.log(tol), lo, s, xtol=1e-6)
        self._cache[tol] = s
        return s


MIN_LENGTH = 1.0


def truncated_halfline(t, direction, kernel_decay, tol, m=64) -> QuadratureRule:
    """Gauss-Legendre rule on (t, t+T) ("above") or (t-T, t) ("below").

    The far end sits where the decay model's tail mass drops below tol
    (measured in the "above" orientation; for "below" the model is applied
    to the reflected coordinate).
    """
    if not 1e-16 < tol < 1e-4:
        raise ValueError(f"tol must lie in (1e-16, 1e-4), got {tol}")
    s = kernel_decay.cutoff(tol)
    if direction == "above":
        end = max(s, t + MIN_LENGTH)
        return map_to_interval(gauss_legendre(m), t, end)
    if direction == "below":
        end = min(-s, t - MIN_LENGTH)
        return map_to_interval(gauss_legendre(m), end, t)
    raise ValueError(f"direction must be 'above' or 'below', got {direction!r}")
