"""Christoffel-Darboux, edge-scaled Hermite and Airy kernels.

All evaluators take node arrays and return the full kernel matrix
``K(xi_i, eta_j)``; pointwise functions wrap them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import airy_arrays, hermite_arrays

DIAGONAL_GAP = 1e-5
BLOCKS = ("11", "12", "21", "22")


def cd_matrix(n, lx, px, dx, ly, py, dy, gap=DIAGONAL_GAP):
    """K_n on the outer grid lx x ly from phi_n, phi_n' values.

    Pairs closer than `gap` use the analytic diagonal with a first-order
    Taylor correction instead of the ratio.
    """
    lx = lx[:, None]
    ly = ly[None, :]
    px_, dx_ = px[:, None], dx[:, None]
    py_, dy_ = py[None, :], dy[None, :]
    diff = lx - ly
    near = np.abs(diff) < gap
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = 0.5 * (px_ * dy_ - dx_ * py_) / diff
    out = ratio - 0.5 * px_ * py_
    if near.any():
        # analytic diagonal from phi'' = (t^2 - 2n - 1) phi plus first-order Taylor
        diag = 0.5 * (dx_**2 + (2 * n + 1 - lx**2) * px_**2) - 0.5 * px_**2
        slope = -lx * px_**2 - px_ * dx_
        taylor = diag - 0.5 * diff * slope
        out = np.where(near, taylor, out)
    return out


def hermite_kernel_matrix(n, xs, ys, gap=DIAGONAL_GAP):
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    px, dx = hermite_arrays(n, xs)
    py, dy = hermite_arrays(n, ys)
    return cd_matrix(n, xs, px, dx, ys, py, dy, gap)


def hermite_kernel(n: int, xi: float, eta: float) -> float:
    """K_n(xi, eta) = sum_{k<n} phi_k(xi) phi_k(eta), Christoffel-Darboux form."""
    if n < 1:
        raise ValueError("n must be positive")
    return float(hermite_kernel_matrix(n, [xi], [eta])[0, 0])


def edge_scale(n):
    return 2**-0.5 * n ** (-1.0 / 6.0)


def edge_map(n, side, t):
    """Unscaled location of the scaled coordinate t at the lower ('1') or upper ('2') edge."""
    c = edge_scale(n)
    t = np.asarray(t, dtype=float)
    if side == "1":
        return -math.sqrt(2.0 * n) - c * t
    if side == "2":
        return math.sqrt(2.0 * n) + c * t
    raise ValueError(f"side must be '1' or '2', got {side!r}")


def edge_scaled_matrix(n, block, xs, ys):
    if block not in BLOCKS:
        raise ValueError(f"block must be one of {BLOCKS}, got {block!r}")
    lx = edge_map(n, block[0], xs)
    ly = edge_map(n, block[1], ys)
    return edge_scale(n) * hermite_kernel_matrix(n, lx, ly)


def edge_scaled_kernel(n: int, block: str, xi: float, eta: float) -> float:
    return float(edge_scaled_matrix(n, block, [xi], [eta])[0, 0])


def _airy_matrix(xs, ys, gap=DIAGONAL_GAP):
    ax, apx = airy_arrays(xs)
    ay, apy = airy_arrays(ys)
    x = xs[:, None]
    diff = x - ys[None, :]
    near = np.abs(diff) < gap
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (ax[:, None] * apy[None, :] - apx[:, None] * ay[None, :]) / diff
    if near.any():
        # K(x,x) = Ai'(x)^2 - x Ai(x)^2, d/dx K(x,x) = -Ai(x)^2
        diag = apx[:, None] ** 2 - x * ax[:, None] ** 2
        taylor = diag + 0.5 * diff * ax[:, None] ** 2
        out = np.where(near, taylor, out)
    return out


def airy_kernel_matrix(xs, ys, gap=DIAGONAL_GAP):
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    return _airy_matrix(xs, ys, gap)


def airy_kernel(xi: float, eta: float) -> float:
    """(Ai(xi) Ai'(eta) - Ai'(xi) Ai(eta)) / (xi - eta)."""
    return float(airy_kernel_matrix([xi], [eta])[0, 0])


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel to sample: 'hermite' (K_n), 'edge' (K_block^(n)) or 'airy'."""

    kind: str
    n: int | None = None
    block: str | None = None

    def __post_init__(self):
        if self.kind not in ("hermite", "edge", "airy"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind in ("hermite", "edge") and (self.n is None or self.n < 1):
            raise ValueError("finite-n kernels need n >= 1")
        if self.kind == "edge" and self.block not in BLOCKS:
            raise ValueError(f"edge kernel needs block in {BLOCKS}")

    @property
    def description(self):
        if self.kind == "airy":
            return "Airy kernel"
        if self.kind == "hermite":
            return f"Hermite kernel K_{self.n}"
        return f"edge-scaled Hermite kernel K_{self.block}^({self.n})"

    @property
    def symmetric(self):
        return self.kind != "edge" or self.block in ("11", "22")

    def matrix(self, xs, ys):
        if self.kind == "airy":
            return airy_kernel_matrix(xs, ys)
        if self.kind == "hermite":
            return hermite_kernel_matrix(self.n, xs, ys)
        return edge_scaled_matrix(self.n, self.block, xs, ys)

    def __call__(self, xi, eta):
        return float(self.matrix([xi], [eta])[0, 0])


AIRY = KernelSpec("airy")
