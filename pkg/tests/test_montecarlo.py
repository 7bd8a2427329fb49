import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from conftest import MC_SEED, mc_correlation
from oracles import RHO2
from gue_extremes.montecarlo import (
    BLOCK,
    EnsembleSpec,
    block_rng,
    edge_convention_check,
    extremes_of,
    lower_matrices,
    sample_correlation,
    sample_extremes,
    sample_extremes_batch,
    sample_matrices,
    sturm_count,
    tridiagonalize,
    tridiagonalize_lapack,
)
from gue_extremes.moments import correlation_extremes, tw_moments


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec("goe", 4)
    with pytest.raises(ValueError):
        EnsembleSpec("gue", 0)


def test_matrices_hermitian():
    h = sample_matrices(EnsembleSpec("gue", 7), 5, block_rng(1, 0))
    np.testing.assert_array_equal(h, np.conj(np.swapaxes(h, 1, 2)))
    assert np.all(np.imag(np.diagonal(h, axis1=1, axis2=2)) == 0)


def test_gue_entry_variances():
    h = sample_matrices(EnsembleSpec("gue", 6), 20000, block_rng(2, 0))
    diag = np.real(np.diagonal(h, axis1=1, axis2=2)).ravel()
    off = h[:, 3, 1]
    assert np.var(diag) == pytest.approx(0.5, rel=0.03)
    assert np.var(off.real) == pytest.approx(0.25, rel=0.03)
    assert np.var(off.imag) == pytest.approx(0.25, rel=0.03)


def test_uniform_entry_range():
    h = sample_matrices(EnsembleSpec("uniform", 5), 2000, block_rng(3, 0))
    assert np.max(np.abs(h.real)) <= 1 and np.max(np.abs(h.imag)) <= 1
    assert np.var(h[:, 2, 0].imag) == pytest.approx(1 / 3, rel=0.1)


@settings(max_examples=30)
@given(st.integers(0, 2**63 - 1))
def test_trace_invariance_n2(seed):
    spec = EnsembleSpec("gue", 2)
    pair = sample_extremes(spec, seed)
    h = lower_matrices(spec, 1, block_rng(seed, 0))[0]
    assert pair.lam_min <= pair.lam_max
    assert pair.lam_min + pair.lam_max == pytest.approx(np.trace(h).real, abs=1e-12)


def test_mean_lam_max_n2():
    _, lmax = sample_extremes_batch(EnsembleSpec("gue", 2), 100_000, MC_SEED)
    se = lmax.std(ddof=1) / math.sqrt(lmax.size)
    assert abs(lmax.mean() - math.sqrt(2 / math.pi)) < 3 * se


def test_diagonal_hook():
    rng = np.random.default_rng(4)
    d = rng.standard_normal((10, 8))
    h = np.zeros((10, 8, 8), dtype=complex)
    h[:, np.arange(8), np.arange(8)] = d
    for method in ("lapack", "numpy"):
        lo, hi = extremes_of(h, method)
        np.testing.assert_array_equal(lo, d.min(axis=1))
        np.testing.assert_array_equal(hi, d.max(axis=1))


def _charpoly_roots(h):
    """Eigenvalues from Faddeev-LeVerrier coefficients and polynomial root isolation at 50 digits."""
    with mpmath.workdps(50):
        n = h.shape[0]
        A = mpmath.matrix([[mpmath.mpc(complex(h[i, j])) for j in range(n)] for i in range(n)])
        M = mpmath.zeros(n, n)
        coeffs = [mpmath.mpf(1)]
        for k in range(1, n + 1):
            M = A * M + coeffs[-1] * mpmath.eye(n)
            AM = A * M
            c = -sum(AM[i, i] for i in range(n)) / k
            coeffs.append(c)
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
        return sorted(float(mpmath.re(r)) for r in roots)


@pytest.mark.parametrize("seed", range(6))
def test_bisection_against_charpoly(seed):
    h = sample_matrices(EnsembleSpec("gue", 6), 1, block_rng(seed, 7))
    roots = _charpoly_roots(h[0])
    lo, hi = extremes_of(h)
    assert abs(lo[0] - roots[0]) < 1e-9
    assert abs(hi[0] - roots[-1]) < 1e-9


@pytest.mark.parametrize("kind,n", [("gue", 3), ("gue", 17), ("uniform", 9), ("uniform", 40)])
def test_tridiagonal_paths_agree(kind, n):
    h = sample_matrices(EnsembleSpec(kind, n), 20, block_rng(5, 0))
    ev = np.linalg.eigvalsh(h)
    for method in ("lapack", "numpy"):
        lo, hi = extremes_of(h, method)
        np.testing.assert_allclose(lo, ev[:, 0], atol=1e-10)
        np.testing.assert_allclose(hi, ev[:, -1], atol=1e-10)
    d1, e1 = tridiagonalize(h)
    d2, e2 = tridiagonalize_lapack(h)
    assert np.all(e1 >= 0) and np.all(e2 >= 0)
    # same trace and Frobenius norm as the original matrices
    np.testing.assert_allclose(d1.sum(1), d2.sum(1), atol=1e-10)
    np.testing.assert_allclose((d1**2).sum(1) + 2 * (e1**2).sum(1), (d2**2).sum(1) + 2 * (e2**2).sum(1), rtol=1e-12)


def test_sturm_count_full_spectrum():
    h = sample_matrices(EnsembleSpec("gue", 12), 4, block_rng(6, 0))
    d, e = tridiagonalize_lapack(h)
    ev = np.linalg.eigvalsh(h)
    for k in range(12):
        mid = ev[:, k] + 1e-7
        np.testing.assert_array_equal(sturm_count(d, e * e, mid), k + 1)


def test_semicircle_n200():
    n = 200
    h = sample_matrices(EnsembleSpec("gue", n), 60, block_rng(MC_SEED, 0))
    ev = np.linalg.eigvalsh(h).ravel()
    R = math.sqrt(2 * n)
    edges = np.linspace(-R, R, 21)
    counts, _ = np.histogram(np.clip(ev, -R, R), edges)
    cdf = lambda x: 0.5 + (x * np.sqrt(R * R - x * x) / (R * R) + np.arcsin(x / R)) / math.pi
    expected = np.diff(cdf(edges)) * ev.size
    assert stats.chisquare(counts, expected).pvalue > 1e-3


def test_reproducible():
    spec = EnsembleSpec("uniform", 5)
    assert sample_correlation(spec, 700, 99) == sample_correlation(spec, 700, 99)
    assert sample_correlation(spec, 700, 99) != sample_correlation(spec, 700, 100)
    assert sample_extremes(spec, 3) == sample_extremes(spec, 3)


def test_prefix_stability():
    # streams are per fixed block, so a shorter run is a prefix of a longer one
    spec = EnsembleSpec("gue", 4)
    a = sample_extremes_batch(spec, BLOCK + 37, 11)
    b = sample_extremes_batch(spec, 3 * BLOCK, 11)
    np.testing.assert_array_equal(a[0], b[0][: BLOCK + 37])
    np.testing.assert_array_equal(a[1], b[1][: BLOCK + 37])


def test_scale_invariance():
    a = sample_correlation(EnsembleSpec("uniform", 10), 2000, 5)
    b = sample_correlation(EnsembleSpec("uniform", 10, 3.7), 2000, 5)
    assert abs(a[0] - b[0]) < 1e-12


def test_sample_count_guard():
    with pytest.raises(ValueError):
        sample_correlation(EnsembleSpec("gue", 4), 99, 1)


@pytest.mark.slow
def test_gue_n2_correlation():
    rho, se = mc_correlation("gue", 2, 1_000_000)
    assert abs(rho - RHO2) < 3 * se


@pytest.mark.slow
def test_gue_n50_against_determinant():
    rho, se = mc_correlation("gue", 50, 100_000)
    assert abs(rho - correlation_extremes(50).rho_det) < 3 * se


@pytest.mark.slow
def test_edge_convention():
    tw = tw_moments()
    mean, se = edge_convention_check(100_000, 100, MC_SEED)
    assert abs(mean - tw.mean) < 3 * se + 0.15
    again = edge_convention_check(2000, 100, MC_SEED)
    assert again == edge_convention_check(2000, 100, MC_SEED)


def test_edge_convention_wrong_variance():
    tw = tw_moments()
    mean, se = edge_convention_check(2000, 100, MC_SEED, scale=2.0)
    assert abs(mean - tw.mean) > 100 * (3 * se + 0.15)


def test_edge_check_guard():
    with pytest.raises(ValueError):
        edge_convention_check(1000, 20, 1)


@pytest.mark.slow
def test_uniform_ratio_n50():
    rho_u, se_u = mc_correlation("uniform", 50, 100_000)
    ratio = rho_u / correlation_extremes(50).rho_det
    assert 2.0 <= ratio <= 4.0
