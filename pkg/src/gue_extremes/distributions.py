"""Tracy-Widom F2 and the finite-n laws of the edge-scaled extreme eigenvalues.

Public orientation: ``x`` refers to the scaled smallest eigenvalue
``2^{1/2} n^{1/6} (lam_min + sqrt(2n))`` and ``y`` to the scaled largest
``2^{1/2} n^{1/6} (lam_max - sqrt(2n))``, so that::

    joint_cdf(n, x, y) = P(lam_min~ <= x, lam_max~ <= y).

Internally the lower edge is handled in the reflected coordinate
``a = -x``, where the gap probability ``P(-lam_min~ <= a)`` is the
determinant of the edge-scaled kernel K_11^(n) on (a, oo).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import fredholm
from .fredholm import BlockOperator2x2, DiscretizedOperator, det_block, det_identity_minus, det_one_minus, discretize
from .kernels import KernelSpec, cd_matrix, edge_map, edge_scale
from .quadrature import GaussianTail, QuadratureRule, truncated_halfline
from .specfun import hermite_arrays

TW_MIN_T = -12.0
DEFAULT_TOL = 1e-10


class DomainError(ValueError):
    pass


# ------------------------------------------------------------ Tracy-Widom


def _check_tw(t):
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    if t < TW_MIN_T:
        raise DomainError(f"F2({t}) underflows double precision; t must be >= {TW_MIN_T}")


def tw_cdf(t: float, tol: float = DEFAULT_TOL, m: int | None = None) -> float:
    """F2(t) = det(I - P_t K_Airy P_t)."""
    _check_tw(t)
    if m is None:
        m = fredholm.airy_nodes_for(t, tol)
    return fredholm.airy_det_and_u(t, tol, m)[0]


def tw_cdf_pdf(t: float, tol: float = DEFAULT_TOL, m: int | None = None):
    """(F2(t), F2'(t)) from one factorization, F2' = F2 u."""
    _check_tw(t)
    if m is None:
        m = fredholm.airy_nodes_for(t, tol)
    det, u = fredholm.airy_det_and_u(t, tol, m)
    return det, det * u


def tw_pdf(t: float, tol: float = DEFAULT_TOL, m: int | None = None) -> float:
    return tw_cdf_pdf(t, tol, m)[1]


def tw_pdf_fd(t: float, h: float = 1e-4, tol: float = 1e-13, m: int = 128) -> float:
    """Centered difference of F2; a cross-check path only."""
    return (tw_cdf(t + h, tol, m) - tw_cdf(t - h, tol, m)) / (2 * h)


# ----------------------------------------------------------- finite n


@dataclass(frozen=True)
class EdgeSide:
    """Half-line (t, end) at the lower ('1') or upper ('2') edge with cached Hermite data."""

    n: int
    side: str
    t: float
    rule: QuadratureRule
    lam: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    dphi: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, n, side, t, tol, m):
        rule = truncated_halfline(t, "above", GaussianTail(n), tol, m)
        lam = edge_map(n, side, rule.nodes)
        phi, dphi = hermite_arrays(n, lam)
        return cls(n, side, float(t), rule, lam, phi, dphi)

    def block(self, other: "EdgeSide") -> np.ndarray:
        raw = edge_scale(self.n) * cd_matrix(self.n, self.lam, self.phi, self.dphi, other.lam, other.phi, other.dphi)
        return fredholm.weighted(raw, self.rule.weights, other.rule.weights)

    @cached_property
    def diagonal_block(self) -> np.ndarray:
        return self.block(self)

    def gap(self) -> float:
        return det_identity_minus(self.diagonal_block)


def _edge_operator(n, side, t, tol, m) -> DiscretizedOperator:
    rule = truncated_halfline(t, "above", GaussianTail(n), tol, m)
    return discretize(KernelSpec("edge", n, side + side), rule)


def _gap(n, side, t, tol, m):
    if m is None:
        m = finite_nodes_for(n, t, tol)
    return det_one_minus(_edge_operator(n, side, t, tol, m))


def finite_nodes_for(n, t, tol):
    """Node count (doubling from 16) at which the upper-edge gap at t has settled."""
    _, m = fredholm._converge(lambda m: det_one_minus(_edge_operator(n, "2", t, tol, m)), tol)
    return m


def marginal_max_cdf(n: int, y: float, tol: float = DEFAULT_TOL, m: int | None = None) -> float:
    """P(lam_max~ <= y) = det(I - P_y K_22^(n) P_y)."""
    _check_n(n)
    return _gap(n, "2", y, tol, m)


def marginal_min_reflected_cdf(n: int, a: float, tol: float = DEFAULT_TOL, m: int | None = None) -> float:
    """P(-lam_min~ <= a) = det(I - P_a K_11^(n) P_a); equals marginal_max_cdf(n, a)."""
    _check_n(n)
    return _gap(n, "1", a, tol, m)


def marginal_min_cdf(n: int, x: float, tol: float = DEFAULT_TOL, m: int | None = None) -> float:
    """P(lam_min~ <= x)."""
    return 1.0 - marginal_min_reflected_cdf(n, -x, tol, m)


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")


def unscaled_endpoints(n, x, y):
    """(X, Y) with lam_min~ <= x  <=>  lam_min <= X and lam_max~ <= y  <=>  lam_max <= Y."""
    c = edge_scale(n)
    return -math.sqrt(2.0 * n) + c * x, math.sqrt(2.0 * n) + c * y


def gap_valid(n, a, b):
    """Whether the reflected-orientation pair (a, b) has disjoint edge intervals."""
    return a + b > -4.0 * n ** (2.0 / 3.0)


def pair_gap(lower: EdgeSide, upper: EdgeSide) -> float:
    """P(-lam_min~ <= a, lam_max~ <= b) from two cached sides."""
    a12 = lower.block(upper)
    # K_21(xi, eta) = K_12(eta, xi) since K_n is symmetric
    return det_identity_minus(np.block([[lower.diagonal_block, a12], [a12.T, upper.diagonal_block]]))


def _block_operator(n, a, b, tol, m) -> BlockOperator2x2:
    rx = truncated_halfline(a, "above", GaussianTail(n), tol, m)
    ry = truncated_halfline(b, "above", GaussianTail(n), tol, m)
    return BlockOperator2x2(
        discretize(KernelSpec("edge", n, "11"), rx),
        discretize(KernelSpec("edge", n, "12"), rx, ry),
        discretize(KernelSpec("edge", n, "21"), ry, rx),
        discretize(KernelSpec("edge", n, "22"), ry),
    )


@dataclass(frozen=True)
class JointCdfValue:
    n: int
    x: float
    y: float
    joint: float
    product: float
    correction_predictor: float
    marginal_x: float
    marginal_y: float

    @property
    def deviation(self):
        return self.joint - self.product


def joint_cdf(n: int, x: float, y: float, tol: float = DEFAULT_TOL, m: int | None = None) -> JointCdfValue:
    """P(lam_min~ <= x, lam_max~ <= y) through the 2x2 operator-matrix determinant."""
    _check_n(n)
    X, Y = unscaled_endpoints(n, x, y)
    if not X < Y:
        raise DomainError(
            f"unscaled endpoints violate X < Y (X = {X:.6g}, Y = {Y:.6g}); "
            "the determinant formula needs disjoint intervals (-oo, X) and (Y, oo)"
        )
    a = -x
    if m is None:
        m = _joint_nodes_for(n, a, y, tol)
    gap = det_block(_block_operator(n, a, y, tol, m))
    fmin_refl = marginal_min_reflected_cdf(n, a, tol, m)
    fmax = marginal_max_cdf(n, y, tol, m)
    # P(min <= x, max <= y) = P(max <= y) - P(min > x, max <= y)
    joint = fmax - gap
    fmin = 1.0 - fmin_refl
    _, px = tw_cdf_pdf(max(-x, TW_MIN_T), tol)
    _, py = tw_cdf_pdf(max(y, TW_MIN_T), tol)
    corr = 0.25 * px * py * n ** (-2.0 / 3.0)
    return JointCdfValue(n, x, y, joint, fmin * fmax, corr, fmin, fmax)


def _joint_nodes_for(n, a, b, tol):
    _, m = fredholm._converge(lambda m: det_block(_block_operator(n, a, b, tol, m)), tol)
    return m


def expansion_predictor(n: int, x: float, y: float, tol: float = DEFAULT_TOL) -> float:
    """Two-term model (1 - F2(-x)) F2(y) + 1/4 F2'(-x) F2'(y) n^{-2/3} of the joint law."""
    fx, px = tw_cdf_pdf(max(-x, TW_MIN_T), tol)
    fy, py = tw_cdf_pdf(max(y, TW_MIN_T), tol)
    return (1.0 - fx) * fy + 0.25 * px * py * n ** (-2.0 / 3.0)


# ------------------------------------------------------------- tables


@dataclass
class DistributionGrid:
    grid: np.ndarray
    cdf: np.ndarray
    pdf: np.ndarray | None
    law: str
    tol: float


def parse_grid(spec: str) -> np.ndarray:
    """'lo:hi:step' -> inclusive array."""
    lo, hi, step = (float(v) for v in spec.split(":"))
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {spec!r}")
    k = int(round((hi - lo) / step))
    return lo + step * np.arange(k + 1)


def tw_table(grid, tol: float = DEFAULT_TOL) -> DistributionGrid:
    grid = np.asarray(grid, dtype=float)
    m = max(fredholm.airy_nodes_for(float(grid.min()), tol), 64)
    vals = np.array([tw_cdf_pdf(float(t), tol, m) for t in grid])
    return DistributionGrid(grid, vals[:, 0], vals[:, 1], "TW2", tol)


def marginal_table(n: int, grid, tol: float = DEFAULT_TOL, which: str = "max") -> DistributionGrid:
    grid = np.asarray(grid, dtype=float)
    m = finite_nodes_for(n, float(grid.min()), tol)
    if which == "max":
        cdf = np.array([marginal_max_cdf(n, float(t), tol, m) for t in grid])
        law = f"MaxScaled({n})"
    elif which == "min":
        cdf = np.array([marginal_min_cdf(n, float(t), tol, m) for t in grid])
        law = f"MinScaled({n})"
    else:
        raise ValueError("which must be 'min' or 'max'")
    return DistributionGrid(grid, cdf, None, law, tol)
