"""Nystrom discretization and Fredholm determinants.

An integral operator with kernel K on a quadrature rule (x_i, w_i) becomes
the matrix ``sqrt(w_i) K(x_i, x_j) sqrt(w_j)``; det(I - K) is then
approximated by the finite determinant, with exponential convergence in
the node count for analytic kernels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .kernels import AIRY, KernelSpec
from .quadrature import AiryTail, QuadratureRule, truncated_halfline
from .specfun import airy_arrays

LOG_UNDERFLOW = math.log(1e-250)


class SingularOperatorError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DiscretizedOperator:
    matrix: np.ndarray
    rule: QuadratureRule
    kernel: KernelSpec | None = None
    col_rule: QuadratureRule | None = None

    @property
    def columns(self):
        return self.rule if self.col_rule is None else self.col_rule

    @property
    def is_square(self):
        return self.col_rule is None


@dataclass(frozen=True)
class BlockOperator2x2:
    a11: DiscretizedOperator
    a12: DiscretizedOperator
    a21: DiscretizedOperator
    a22: DiscretizedOperator

    def __post_init__(self):
        mx, my = len(self.a11.rule), len(self.a22.rule)
        if self.a12.matrix.shape != (mx, my) or self.a21.matrix.shape != (my, mx):
            raise ValueError("off-diagonal blocks do not match the diagonal rules")

    def assemble(self):
        return np.block([[self.a11.matrix, self.a12.matrix], [self.a21.matrix, self.a22.matrix]])


def weighted(matrix, wx, wy):
    return np.sqrt(wx)[:, None] * matrix * np.sqrt(wy)[None, :]


def discretize(kernel, rule, col_rule=None) -> DiscretizedOperator:
    """Nystrom matrix of `kernel` (a KernelSpec or any callable on node arrays)."""
    cols = rule if col_rule is None else col_rule
    if isinstance(kernel, KernelSpec):
        raw = kernel.matrix(rule.nodes, cols.nodes)
        spec = kernel
    else:
        raw = np.asarray(kernel(rule.nodes[:, None], cols.nodes[None, :]), dtype=float)
        raw = np.broadcast_to(raw, (len(rule), len(cols))).copy()
        spec = None
    return DiscretizedOperator(weighted(raw, rule.weights, cols.weights), rule, spec, col_rule)


def det_identity_minus(matrix) -> float:
    """det(I - matrix) via LU with partial pivoting."""
    a = np.eye(len(matrix)) - matrix
    if len(a) == 0:
        return 1.0
    lu, piv = lu_factor(a, check_finite=True)
    d = np.diag(lu)
    if np.any(d == 0.0):
        raise SingularOperatorError("I - K is singular")
    sign = -1.0 if np.count_nonzero(piv != np.arange(len(piv))) % 2 else 1.0
    sign *= -1.0 if np.count_nonzero(d < 0) % 2 else 1.0
    logabs = math.fsum(np.log(np.abs(d)))
    if logabs < LOG_UNDERFLOW:
        # product of pivots would lose precision in subnormals
        return sign * math.exp(logabs)
    return sign * float(np.prod(np.abs(d)))


def det_one_minus(op: DiscretizedOperator) -> float:
    if not op.is_square:
        raise ValueError("det_one_minus needs a square operator")
    return det_identity_minus(op.matrix)


def det_block(block: BlockOperator2x2) -> float:
    return det_identity_minus(block.assemble())


def resolvent_apply(op: DiscretizedOperator, f) -> np.ndarray:
    """Solve (I - K) u = f."""
    a = np.eye(len(op.matrix)) - op.matrix
    lu, piv = lu_factor(a)
    if np.any(np.diag(lu) == 0.0):
        raise SingularOperatorError("I - K is singular")
    return lu_solve((lu, piv), np.asarray(f, dtype=float))


def rank_one(f, g, rule: QuadratureRule) -> DiscretizedOperator:
    """Nystrom matrix of the operator f (x) g : h -> <g, h> f."""
    w = np.sqrt(rule.weights)
    return DiscretizedOperator(np.outer(w * f(rule.nodes), w * g(rule.nodes)), rule)


# ----------------------------------------------------------- Airy pieces


def airy_operator(t, tol, m) -> DiscretizedOperator:
    """P_t K P_t for the Airy kernel on the truncated half-line above t."""
    rule = truncated_halfline(t, "above", AiryTail(), tol, m)
    return discretize(AIRY, rule)


def airy_det_and_u(t, tol, m):
    """(det(I - P_t K P_t), u(t)) from one factorization."""
    op = airy_operator(t, tol, m)
    a = np.eye(len(op.matrix)) - op.matrix
    lu, piv = lu_factor(a)
    d = np.diag(lu)
    sign = -1.0 if np.count_nonzero(piv != np.arange(len(piv))) % 2 else 1.0
    sign *= -1.0 if np.count_nonzero(d < 0) % 2 else 1.0
    det = sign * math.exp(math.fsum(np.log(np.abs(d))))
    ai = airy_arrays(op.rule.nodes)[0] * np.sqrt(op.rule.weights)
    u = float(ai @ lu_solve((lu, piv), ai))
    return det, u


def _converge(fn, tol, m0=16, m_max=1024):
    """Evaluate fn(m) with m doubling from m0 until successive values agree to tol."""
    m = m0
    prev = fn(m)
    while True:
        m2 = 2 * m
        cur = fn(m2)
        if np.all(np.abs(np.asarray(cur) - np.asarray(prev)) < tol) or m2 >= m_max:
            return cur, m2
        prev, m = cur, m2


def _airy_cdf_pdf(t, tol, m):
    det, u = airy_det_and_u(t, tol, m)
    return det, det * u


def airy_nodes_for(t, tol):
    """Node count (doubling from 16) at which F2 and F2' at t have settled to tol."""
    _, m = _converge(lambda m: _airy_cdf_pdf(t, tol, m), tol)
    return m


def u_function(t: float, tol: float = 1e-10, m: int | None = None) -> float:
    """<(I - P_t K P_t)^{-1} chi_t Ai, chi_t Ai>, which equals F2'(t)/F2(t)."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    if m is None:
        m = airy_nodes_for(t, tol)
    return airy_det_and_u(t, tol, m)[1]
