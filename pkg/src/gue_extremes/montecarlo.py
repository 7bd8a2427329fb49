"""Monte Carlo for the extreme eigenvalues of GUE and a uniform Wigner ensemble.

Matrices are reduced to real symmetric tridiagonal form by Householder
reflections (the complex phases of the subdiagonal are absorbed by a
diagonal unitary similarity); the two extreme eigenvalues are then
bracketed by Gershgorin discs and found by Sturm-sequence bisection.
Everything is batched over a leading sample axis.  The hot path hands each
matrix to LAPACK's Householder reduction (zhetrd); ``tridiagonalize`` is a
batched numpy implementation of the same reduction, kept as a cross-check.

Random streams: samples are grouped into fixed blocks of BLOCK draws and
block k uses Philox keyed by SeedSequence((seed, k)).  Results therefore
depend only on (seed, samples), not on how the work is split.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

BLOCK = 512
BISECTION_TOL = 1e-12
ENSEMBLES = ("gue", "uniform")


@dataclass(frozen=True)
class EnsembleSpec:
    """kind 'gue': density proportional to exp(-tr H^2); 'uniform': every real
    degree of freedom Uniform[-1, 1].  ``scale`` multiplies all entries (test hook)."""

    kind: str
    n: int
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ENSEMBLES:
            raise ValueError(f"ensemble must be one of {ENSEMBLES}, got {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")


@dataclass(frozen=True)
class ExtremePair:
    lam_min: float
    lam_max: float


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, block))))


def _draw(spec, count, rng):
    n = spec.n
    k = n * (n - 1) // 2
    if spec.kind == "gue":
        diag = rng.standard_normal((count, n)) * math.sqrt(0.5)
        off = rng.standard_normal((count, 2, k)) * 0.5
    else:
        diag = rng.uniform(-1.0, 1.0, size=(count, n))
        off = rng.uniform(-1.0, 1.0, size=(count, 2, k))
    return diag, off[:, 0] + 1j * off[:, 1]


def lower_matrices(spec: EnsembleSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Only the lower triangle and diagonal of each Hermitian draw (upper part zero)."""
    n = spec.n
    diag, off = _draw(spec, count, rng)
    h = np.zeros((count, n, n), dtype=complex)
    # row i of the strict lower triangle is a contiguous run of length i
    o = 0
    for i in range(1, n):
        h[:, i, :i] = off[:, o : o + i]
        o += i
    h[:, np.arange(n), np.arange(n)] = diag
    if spec.scale != 1.0:
        h *= spec.scale
    return h


def sample_matrices(spec: EnsembleSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """A (count, n, n) stack of full Hermitian matrices."""
    low = lower_matrices(spec, count, rng)
    strict = np.tril(low, -1)
    return low + np.conj(np.swapaxes(strict, 1, 2))


def tridiagonalize(h: np.ndarray):
    """Householder reduction of a Hermitian stack to real tridiagonal (d, e).

    d has shape (B, n), e (B, n-1) with e >= 0.
    """
    a = np.array(h, dtype=complex, copy=True)
    if a.ndim == 2:
        a = a[None]
    bsz, n, _ = a.shape
    sub = np.zeros((bsz, max(n - 1, 0)), dtype=complex)
    for k in range(n - 2):
        x = a[:, k + 1 :, k]
        alpha = np.linalg.norm(x, axis=1)
        x0 = x[:, 0]
        ax0 = np.abs(x0)
        phase = np.where(ax0 > 0, x0 / np.where(ax0 > 0, ax0, 1.0), 1.0)
        v = x.copy()
        v[:, 0] += phase * alpha
        vn = np.linalg.norm(v, axis=1)
        ok = vn > 0
        v = np.where(ok[:, None], v / np.where(ok, vn, 1.0)[:, None], 0.0)
        # H A H with H = I - 2 v v^*:  A - 2 v w^* - 2 w v^*,  w = p - (v^* p) v,  p = A v
        s = a[:, k + 1 :, k + 1 :]
        p = np.matmul(s, v[:, :, None])[:, :, 0]
        beta = np.einsum("bi,bi->b", v.conj(), p)
        w = p - beta[:, None] * v
        left = np.stack([v, w], axis=2)
        right = np.stack([w, v], axis=1).conj()
        s -= 2.0 * np.matmul(left, right)
        sub[:, k] = np.where(ok, -phase * alpha, x0)
    if n >= 2:
        sub[:, n - 2] = a[:, n - 1, n - 2]
    d = np.real(np.einsum("bii->bi", a))
    # a diagonal unitary similarity turns the complex subdiagonal into |e|
    return d, np.abs(sub)


def sturm_count(d, e2, lam):
    """Number of eigenvalues below lam for each tridiagonal in the batch."""
    lam = np.asarray(lam, dtype=float)
    q = d[:, 0] - lam
    count = (q < 0).astype(int)
    tiny = np.finfo(float).tiny
    for i in range(1, d.shape[1]):
        q = np.where(q == 0.0, tiny, q)
        q = d[:, i] - lam - e2[:, i - 1] / q
        count += q < 0
    return count


def extreme_eigenvalues(d, e, tol=BISECTION_TOL):
    """(lam_min, lam_max) of each symmetric tridiagonal (d, e) by bisection."""
    d = np.atleast_2d(d)
    e = np.atleast_2d(e) if e.size else np.zeros((d.shape[0], 0))
    n = d.shape[1]
    if n == 1:
        return d[:, 0].copy(), d[:, 0].copy()
    r = np.zeros_like(d)
    r[:, :-1] += e
    r[:, 1:] += e
    lo0 = np.min(d - r, axis=1)
    hi0 = np.max(d + r, axis=1)
    # both targets in one pass: rows [0, B) seek lam_min, rows [B, 2B) lam_max
    bsz = d.shape[0]
    dd = np.concatenate([d, d])
    ee2 = np.concatenate([e * e, e * e])
    target = np.repeat([1, n], bsz)
    lo = np.concatenate([lo0, lo0])
    hi = np.concatenate([hi0, hi0])
    span = float(np.max(hi - lo))
    steps = max(1, int(math.ceil(math.log2(max(span, tol) / tol))) + 1)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        below = sturm_count(dd, ee2, mid) >= target
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
    res = 0.5 * (lo + hi)
    lmin, lmax = res[:bsz], res[bsz:]
    # already diagonal: the spectrum is d itself
    diagonal = ~np.any(e != 0, axis=1)
    lmin[diagonal] = np.min(d[diagonal], axis=1)
    lmax[diagonal] = np.max(d[diagonal], axis=1)
    return lmin, lmax


def tridiagonalize_lapack(h: np.ndarray):
    """Same output as ``tridiagonalize`` via zhetrd, one matrix at a time."""
    h = np.asarray(h, dtype=complex)
    if h.ndim == 2:
        h = h[None]
    bsz, n, _ = h.shape
    d = np.empty((bsz, n))
    e = np.empty((bsz, max(n - 1, 0)))
    for i in range(bsz):
        _, di, ei, _, info = lapack.zhetrd(h[i], lower=1)
        if info != 0:
            raise np.linalg.LinAlgError(f"zhetrd failed with info={info}")
        d[i] = di
        e[i] = np.abs(ei)
    return d, e


def extremes_of(h, method="lapack"):
    if method == "lapack":
        d, e = tridiagonalize_lapack(h)
    elif method == "numpy":
        d, e = tridiagonalize(h)
    else:
        raise ValueError(f"unknown method {method!r}")
    return extreme_eigenvalues(d, e)


def sample_extremes_batch(spec: EnsembleSpec, samples: int, seed: int):
    """Arrays (lam_min, lam_max) of length `samples`."""
    lmin = np.empty(samples)
    lmax = np.empty(samples)
    nblocks = -(-samples // BLOCK)
    for b in range(nblocks):
        lo = b * BLOCK
        cnt = min(BLOCK, samples - lo)
        h = lower_matrices(spec, BLOCK, block_rng(seed, b))[:cnt]
        lmin[lo : lo + cnt], lmax[lo : lo + cnt] = extremes_of(h)
    return lmin, lmax


def sample_extremes(spec: EnsembleSpec, seed: int) -> ExtremePair:
    """Extremes of a single matrix drawn from the stream for `seed`."""
    if spec.n < 2:
        raise ValueError("n must be >= 2")
    h = lower_matrices(spec, 1, block_rng(seed, 0))
    lo, hi = extremes_of(h)
    return ExtremePair(float(lo[0]), float(hi[0]))


def pearson(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    return float(np.dot(xc, yc) / math.sqrt(np.dot(xc, xc) * np.dot(yc, yc)))


def sample_correlation(spec: EnsembleSpec, samples: int, seed: int):
    """(rho, stderr) with the large-sample stderr (1 - rho^2) / sqrt(samples)."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    lmin, lmax = sample_extremes_batch(spec, samples, seed)
    rho = pearson(lmin, lmax)
    return rho, (1.0 - rho * rho) / math.sqrt(samples)


def edge_convention_check(samples: int, n: int, seed: int, scale: float = 1.0):
    """(mean, stderr) of 2^{1/2} n^{1/6} (lam_max - sqrt(2n)) over GUE samples."""
    if n < 50:
        raise ValueError("edge check needs n >= 50")
    _, lmax = sample_extremes_batch(EnsembleSpec("gue", n, scale), samples, seed)
    scaled = math.sqrt(2.0) * n ** (1.0 / 6.0) * (lmax - math.sqrt(2.0 * n))
    return float(scaled.mean()), float(scaled.std(ddof=1) / math.sqrt(samples))
