"""Moments of the Tracy-Widom law and correlation of the extreme GUE eigenvalues.

Finite-n covariances use Hoeffding's identity

    Cov(X, Y) = iint [P(X <= a, Y <= b) - P(X <= a) P(Y <= b)] da db,

so only gap probabilities (determinants) are ever evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fredholm
from .distributions import (
    DEFAULT_TOL,
    EdgeSide,
    TW_MIN_T,
    finite_nodes_for,
    gap_valid,
    marginal_max_cdf,
    pair_gap,
    tw_cdf_pdf,
)
from .quadrature import composite

TW_SIGMA2_REFERENCE = 0.8131947928329
TW_LO, TW_HI = -12.0, 8.0


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    law: str
    tol: float
    normalization: float = 1.0
    mean_tail: float | None = None


@dataclass(frozen=True)
class CorrelationRecord:
    n: int
    rho_det: float
    rho_asym: float
    rho_mc: float | None = None
    mc_stderr: float | None = None
    samples: int | None = None
    covariance: float | None = None
    var_min: float | None = None
    var_max: float | None = None


def _panels(lo, hi, width, m):
    """Composite rule with integer-aligned panels (0 is always an edge)."""
    edges = np.arange(math.floor(lo), math.ceil(hi) + 0.5, width)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        r = composite(a, b, 1, m)
        nodes.append(r.nodes)
        weights.append(r.weights)
    return np.concatenate(nodes), np.concatenate(weights)


_TW_CACHE: dict = {}


def tw_moments(tol: float = DEFAULT_TOL, nodes_per_panel: int = 24, support=(TW_LO, TW_HI)) -> MomentSummary:
    """Mean and variance of F2 from t F2' and t^2 F2' on ``support`` (default [-12, 8]).

    The mean is also computed from the tail identity
    E = int_0^oo (1 - F2) - int_-oo^0 F2, reported as ``mean_tail``.
    """
    lo, hi = support
    if lo < TW_MIN_T:
        raise ValueError(f"support must start at or above {TW_MIN_T}")
    key = (tol, nodes_per_panel, lo, hi)
    if key in _TW_CACHE:
        return _TW_CACHE[key]
    m = max(fredholm.airy_nodes_for(-8.0, tol), 64)
    t, w = _panels(lo, hi, 2.0, nodes_per_panel)
    vals = np.array([tw_cdf_pdf(float(s), tol, m) for s in t])
    F, f = vals[:, 0], vals[:, 1]
    norm = float(w @ f)
    mean = float(w @ (t * f))
    second = float(w @ (t * t * f))
    tail = float(w @ np.where(t > 0, 1.0 - F, -F))
    out = MomentSummary(mean, second - mean * mean, "TW2", tol, norm, tail)
    _TW_CACHE[key] = out
    return out


def tw_variance(tol: float = DEFAULT_TOL) -> float:
    return tw_moments(tol).variance


# ------------------------------------------------------------ finite n


def _support(n, tol, m):
    """Integer bounds [L, R] outside which the scaled upper-edge marginal has < tol*1e-2 mass."""
    eps = tol * 1e-2
    lo = -4.0
    while marginal_max_cdf(n, lo, tol, m) > eps:
        lo -= 1.0
    hi = 2.0
    while 1.0 - marginal_max_cdf(n, hi, tol, m) > eps:
        hi += 1.0
    return lo, hi


@dataclass(frozen=True)
class _HoeffdingResult:
    covariance: float
    var_min: float
    var_max: float
    mean_max: float
    rectangle: tuple


def _hoeffding(n, tol, nodes_per_panel, pad=0.0, m=None):
    if m is None:
        m = finite_nodes_for(n, -8.0, tol)
    lo, hi = _support(n, tol, m)
    lo -= pad
    hi += pad
    t, w = _panels(lo, hi, 1.0, nodes_per_panel)
    lower = [EdgeSide.build(n, "1", float(s), tol, m) for s in t]
    upper = [EdgeSide.build(n, "2", float(s), tol, m) for s in t]
    # reflected min (a = -x) and max marginals share the law; both are kept
    Fa = np.array([s.gap() for s in lower])
    Fb = np.array([s.gap() for s in upper])

    # |P(A and B) - P(A)P(B)| <= min(P(A), 1 - P(A), P(B), 1 - P(B))
    skip = tol * 1e-3 / max((hi - lo) ** 2, 1.0)
    h = np.zeros((len(t), len(t)))
    for i, a in enumerate(t):
        ba = min(Fa[i], 1.0 - Fa[i])
        if ba < skip:
            continue
        for j, b in enumerate(t):
            if min(ba, Fb[j], 1.0 - Fb[j]) < skip:
                continue
            g = pair_gap(lower[i], upper[j]) if gap_valid(n, a, b) else 0.0
            h[i, j] = g - Fa[i] * Fb[j]
    # Cov(-lam_min~, lam_max~) = iint h  ->  Cov(lam_min~, lam_max~) = -iint h
    cov = -float(w @ h @ w)
    var_a, _ = _variance_from_cdf(t, w, Fa)
    var_b, mean_b = _variance_from_cdf(t, w, Fb)
    return _HoeffdingResult(cov, var_a, var_b, mean_b, (lo, hi))


def _variance_from_cdf(t, w, F):
    """Variance from E Y = int (1{t>0} - F), E Y^2 = int 2t (1{t>0} - F)."""
    g = np.where(t > 0, 1.0, 0.0) - F
    mean = float(w @ g)
    second = float(w @ (2.0 * t * g))
    return second - mean * mean, mean


_COV_CACHE: dict = {}


def _converged_hoeffding(n, tol, nodes_per_panel=None):
    key = (n, tol, nodes_per_panel)
    if key in _COV_CACHE:
        return _COV_CACHE[key]
    if nodes_per_panel is not None:
        res = _hoeffding(n, tol, nodes_per_panel)
    else:
        q = 6
        res = _hoeffding(n, tol, q)
        while True:
            q2 = 2 * q
            nxt = _hoeffding(n, tol, q2)
            done = abs(nxt.covariance - res.covariance) < tol or q2 >= 48
            res, q = nxt, q2
            if done:
                break
    _COV_CACHE[key] = res
    return res


def covariance_extremes(n: int, tol: float = 1e-8, nodes_per_panel: int | None = None) -> float:
    """Cov(lam_min~, lam_max~) of the edge-scaled extreme eigenvalues of the n x n GUE."""
    if n < 2:
        raise ValueError("covariance needs n >= 2")
    return _converged_hoeffding(n, tol, nodes_per_panel).covariance


def extreme_variances(n: int, tol: float = 1e-8, nodes_per_panel: int | None = None):
    res = _converged_hoeffding(n, tol, nodes_per_panel)
    return res.var_min, res.var_max


def rho_asymptote(n: int, sigma2: float | None = None) -> float:
    """Leading term n^{-2/3} / (4 sigma^2) of the extreme-eigenvalue correlation."""
    if sigma2 is None:
        sigma2 = tw_variance()
    return n ** (-2.0 / 3.0) / (4.0 * sigma2)


def correlation_extremes(n: int, tol: float = 1e-8, nodes_per_panel: int | None = None) -> CorrelationRecord:
    """Correlation of lam_min and lam_max for the n x n GUE.

    Correlation is invariant under the affine edge scaling, so the scaled
    value is the unscaled one.
    """
    if n < 2:
        raise ValueError("correlation needs n >= 2")
    res = _converged_hoeffding(n, tol, nodes_per_panel)
    rho = res.covariance / math.sqrt(res.var_min * res.var_max)
    return CorrelationRecord(
        n, rho, rho_asymptote(n), covariance=res.covariance, var_min=res.var_min, var_max=res.var_max
    )
