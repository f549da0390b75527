from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from widomkit import _random
from widomkit import distributions as D
from widomkit import rmt_samplers as R
from widomkit.numerics import det_dense, ks_distance, ks_two_sample
from widomkit.oracles import brute_force_lis


# --- random streams --------------------------------------------------------

def test_blocks_independent_of_thread_count(monkeypatch):
    def fn(rng, size):
        return rng.standard_normal(size)

    monkeypatch.setenv(_random.THREADS_ENV, "1")
    a = _random.map_blocks(5, "t", 1000, fn, block=64)
    monkeypatch.setenv(_random.THREADS_ENV, "4")
    b = _random.map_blocks(5, "t", 1000, fn, block=64)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, _random.map_blocks(6, "t", 1000, fn, block=64))


def test_thread_env_validated(monkeypatch):
    monkeypatch.setenv(_random.THREADS_ENV, "zero")
    with pytest.raises(ValueError):
        _random.thread_count()


# --- Gaussian ensembles ----------------------------------------------------

@pytest.mark.parametrize("beta", [1, 2, 4])
def test_matrices_hermitian(beta, rng):
    h = R.gaussian_matrices(R.EnsembleSpec(beta, 5), 3, rng)
    assert np.allclose(h, h.conj().transpose(0, 2, 1))


def test_gse_self_dual_and_degenerate(rng):
    n = 4
    h = R.gaussian_matrices(R.EnsembleSpec(4, n), 2, rng)
    j = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    assert np.allclose(j @ h.conj() @ j.T, h)
    lam = np.linalg.eigvalsh(h)
    assert np.allclose(lam[:, 0::2], lam[:, 1::2], atol=1e-10)


def test_gue_variance_convention(rng):
    h = R.gaussian_matrices(R.EnsembleSpec(2, 3), 20000, rng)
    # density exp(-tr H^2): diagonal variance 1/2, off-diagonal real part 1/4
    assert np.var(h[:, 0, 0].real) == pytest.approx(0.5, rel=0.03)
    assert np.var(h[:, 0, 1].real) == pytest.approx(0.25, rel=0.03)


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_tridiagonalization_preserves_spectrum(beta, rng):
    h = R.gaussian_matrices(R.EnsembleSpec(beta, 6), 4, rng)
    d, e = R.tridiagonalize(h)
    t = np.zeros((4,) + h.shape[1:])
    k = np.arange(h.shape[-1])
    t[:, k, k] = d
    t[:, k[:-1], k[:-1] + 1] = e
    t[:, k[:-1] + 1, k[:-1]] = e
    assert np.allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(h), atol=1e-10)
    assert np.allclose(R.largest_eigenvalue(d, e), np.linalg.eigvalsh(h)[:, -1], atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_sturm_matches_characteristic_polynomial(seed):
    rng = np.random.default_rng(seed)
    d, e = rng.standard_normal(6), rng.standard_normal(5)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    lam = R.largest_eigenvalue(d[None], e[None])[0]

    def charpoly(x):
        return np.linalg.det(t - x * np.eye(6))

    # scan down from above the Gershgorin bound to the first sign change, then bisect
    hi = np.max(d) + 2 * np.max(np.abs(e)) + 1.0
    lo = hi
    while np.sign(charpoly(lo)) == np.sign(charpoly(hi)):
        lo -= 1e-4
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if np.sign(charpoly(mid)) == np.sign(charpoly(hi)):
            hi = mid
        else:
            lo = mid
    assert lam == pytest.approx(0.5 * (lo + hi), abs=1e-10)


def test_edge_samples_reproducible():
    spec = R.EnsembleSpec(2, 20)
    a = R.sample_gaussian_edge(spec, 300, seed=3)
    b = R.sample_gaussian_edge(spec, 300, seed=3)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, R.sample_gaussian_edge(spec, 300, seed=4).values)


def _beta_hermite_lambda_max(beta, n, reps, rng):
    # independent tridiagonal model with the same joint eigenvalue density
    from scipy.linalg import eigvalsh_tridiagonal

    out = np.empty(reps)
    for r in range(reps):
        d = rng.normal(0.0, math.sqrt(2.0), n) / math.sqrt(2.0)
        e = np.sqrt(rng.chisquare(beta * np.arange(n - 1, 0, -1.0))) / math.sqrt(2.0)
        out[r] = eigvalsh_tridiagonal(d / math.sqrt(beta), e / math.sqrt(beta),
                                      select="i", select_range=(n - 1, n - 1))[0]
    return out


@pytest.mark.parametrize("beta", [1, 2])
def test_lambda_max_matches_tridiagonal_model(beta, rng):
    batch = R.sample_lambda_max(R.EnsembleSpec(beta, 30), 3000, seed=11)
    oracle = _beta_hermite_lambda_max(beta, 30, 3000, rng)
    assert ks_two_sample(batch.values, oracle) < 0.045


def test_goe_edge_near_f1():
    # the finite-N shift of the GOE edge decays slowly; the tolerance allows for it
    batch = R.sample_gaussian_edge(R.EnsembleSpec(1, 60), 2000, seed=11)
    assert ks_distance(batch.values, D.tw_table(1)) < 0.08


def test_edge_needs_two_rows():
    with pytest.raises(ValueError):
        R.sample_gaussian_edge(R.EnsembleSpec(2, 1), 5)


def test_gse_spectra_deduplicated():
    batch = R.sample_gaussian_spectra(R.EnsembleSpec(4, 5), 7, seed=2)
    assert batch.values.shape == (7, 5)
    assert np.all(np.diff(batch.values, axis=1) > 0)


# --- log-gases -------------------------------------------------------------

def test_log_gas_validation():
    with pytest.raises(ValueError):
        R.LogGasConfig(2, 3, (0.0, -1.0))
    with pytest.raises(ValueError):
        R.LogGasConfig(2, 3, (1.0,))
    with pytest.raises(ValueError):
        R.LogGasConfig(3, 3, (0.0, 1.0))
    with pytest.raises(ValueError):
        R.quartic_config(0.0, 4)


def test_log_weight():
    cfg = R.LogGasConfig(2, 2, (0.0, 1.0))
    lam = np.array([0.5, -1.0])
    assert cfg.log_weight(lam) == pytest.approx(-(0.25 + 1.0) + 2 * math.log(1.5))


def test_metropolis_accept_rule():
    assert R.metropolis_accept(np.array([0.0]), np.array([0.999]))[0]
    assert not R.metropolis_accept(np.array([-10.0]), np.array([0.5]))[0]


def test_gaussian_potential_reproduces_gue_two_by_two():
    cfg = R.LogGasConfig(2, 2, (0.0, 1.0))
    gas = R.metropolis_log_gas(cfg, sweeps=400, reps=10_000, seed=8)
    exact = R.sample_gaussian_spectra(R.EnsembleSpec(2, 2), 10_000, seed=9)
    assert 0.3 < gas.meta["acceptance"] < 0.9
    for j in range(2):
        assert ks_two_sample(gas.values[:, j], exact.values[:, j]) <= 0.05


def _largest_gap(values, bins=60):
    hist, edges = np.histogram(values.ravel(), bins=bins)
    occupied = np.nonzero(hist)[0]
    inner = hist[occupied[0]: occupied[-1] + 1]
    return inner, edges


def test_quartic_single_interval_for_large_t():
    gas = R.metropolis_log_gas(R.quartic_config(3.0, 24), sweeps=300, reps=200, seed=4)
    inner, _ = _largest_gap(gas.values, bins=40)
    assert np.all(inner > 0)


def test_quartic_two_clusters_for_small_t():
    gas = R.metropolis_log_gas(R.quartic_config(0.5, 24), sweeps=300, reps=200, seed=4)
    inner, edges = _largest_gap(gas.values, bins=40)
    centre = np.abs(0.5 * (edges[:-1] + edges[1:])) < 0.1
    mass = np.histogram(gas.values.ravel(), bins=edges)[0]
    assert mass[centre].sum() < 0.002 * gas.values.size
    assert np.sum(gas.values < 0) == pytest.approx(np.sum(gas.values > 0), rel=0.1)


def test_discrete_metropolis_detailed_balance():
    logw = np.log(np.array([1.0, 3.0, 2.0, 5.0, 0.5]))
    counts = R.discrete_metropolis_chain(logw, 400_000, seed=12)
    pi = np.exp(logw) / np.exp(logw).sum()
    visits = counts.sum(axis=1)
    assert np.allclose(visits / visits.sum(), pi, atol=0.01)
    for i in range(4):
        # flows i -> i+1 and i+1 -> i are equal in expectation under detailed balance
        a, b = counts[i, i + 1], counts[i + 1, i]
        assert abs(a - b) <= 3 * math.sqrt(a + b)


# --- longest increasing subsequence ---------------------------------------

def test_patience_trivial():
    assert R.patience_lis([0, 1, 2, 3, 4]) == 5
    assert R.patience_lis([4, 3, 2, 1, 0]) == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_patience_exhaustive(n):
    for perm in itertools.permutations(range(n)):
        assert R.patience_lis(perm) == brute_force_lis(perm)


@given(st.permutations(list(range(8))))
def test_patience_random_length_eight(perm):
    assert R.patience_lis(perm) == brute_force_lis(perm)


def test_lis_mean():
    batch = R.sample_lis(10_000, 300, seed=5)
    assert abs(batch.mean / 100.0 - 2.0) <= 0.1
    assert np.allclose(batch.meta["scaled"], (batch.values - 200.0) / 10_000 ** (1 / 6))


# --- Brownian last passage -------------------------------------------------

def test_single_brownian_is_gaussian():
    batch = R.brownian_lpp(1, t=2.0, n_steps=1000, reps=4000, seed=6)
    assert batch.var * 2.0 == pytest.approx(2.0, rel=0.07)
    assert abs(batch.mean) < 0.05


def test_lpp_validation():
    with pytest.raises(ValueError):
        R.brownian_lpp(3, n_steps=100)
    with pytest.raises(ValueError):
        R.brownian_lpp(0)


def test_lpp_two_paths_matches_gue_two_by_two():
    # for N = 2 the scaled supremum equals sqrt 2 lambda_max of the 2 x 2 ensemble
    lpp = R.brownian_lpp(2, n_steps=16000, reps=4000, seed=7)
    gue = np.sqrt(2.0) * R.sample_lambda_max(R.EnsembleSpec(2, 2), 4000, seed=7).values
    assert ks_two_sample(lpp.values, gue) < 0.04


@pytest.mark.slow
def test_lpp_refined_grid_reaches_gue():
    lpp = R.brownian_lpp(10, n_steps=16000, reps=2000, seed=1729)
    gue = np.sqrt(2.0) * R.sample_lambda_max(R.EnsembleSpec(2, 10), 2000, seed=1729).values
    assert ks_two_sample(lpp.values, gue) <= 0.06


def test_lpp_discretization_bias_shrinks():
    gue_mean = np.sqrt(2.0) * R.sample_lambda_max(R.EnsembleSpec(2, 10), 4000, seed=1).mean
    gaps = [gue_mean - R.brownian_lpp(10, n_steps=n, reps=1000, seed=2).mean for n in (1000, 4000)]
    assert 0 < gaps[1] < gaps[0]
