"""Monte Carlo samplers for Gaussian ensembles, log-gases, LIS and last passage.

Gaussian ensembles follow the density proportional to

    exp(-beta/2 sum lambda_j^2) prod |lambda_j - lambda_k|^beta,

whose spectrum edge sits at sqrt(2N).  Largest eigenvalues come from a
batched Householder reduction to tridiagonal form followed by Sturm-sequence
bisection; the full eigensolver is only used when whole spectra are asked
for.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from ._random import DEFAULT_SEED, generator, map_blocks

BETAS = (1, 2, 4)
ETA = {1: 1.0, 2: 1.0, 4: 2.0}
BISECT_ITERS = 64


@dataclass(frozen=True)
class EnsembleSpec:
    beta: int
    N: int

    def __post_init__(self):
        if self.beta not in BETAS:
            raise ValueError(f"beta must be one of {BETAS}, got {self.beta}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")

    @property
    def tag(self) -> str:
        return f"gaussian-b{self.beta}-n{self.N}"


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    seed: int
    model: str
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def var(self) -> float:
        return float(np.var(self.values, ddof=1))


# --- Gaussian matrices -----------------------------------------------------

def gaussian_matrices(spec: EnsembleSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    """A batch of ``size`` Hermitian matrices; GSE ones are 2N x 2N self-dual."""
    n = spec.N
    if spec.beta == 1:
        a = rng.standard_normal((size, n, n))
        return (a + a.transpose(0, 2, 1)) / 2.0
    if spec.beta == 2:
        a = rng.normal(scale=math.sqrt(0.5), size=(size, n, n, 2))
        a = a[..., 0] + 1j * a[..., 1]
        return (a + a.conj().transpose(0, 2, 1)) / 2.0
    # quaternion blocks [[A, B], [-conj B, conj A]] with A Hermitian, B antisymmetric
    g = rng.normal(scale=math.sqrt(1.0 / 8.0), size=(size, 4, n, n))
    iu = np.triu_indices(n, 1)
    a = np.zeros((size, n, n), dtype=complex)
    b = np.zeros((size, n, n), dtype=complex)
    a[:, iu[0], iu[1]] = g[:, 0][:, iu[0], iu[1]] + 1j * g[:, 1][:, iu[0], iu[1]]
    a = a + a.conj().transpose(0, 2, 1)
    diag = rng.normal(scale=0.5, size=(size, n))
    a[:, np.arange(n), np.arange(n)] = diag
    b[:, iu[0], iu[1]] = g[:, 2][:, iu[0], iu[1]] + 1j * g[:, 3][:, iu[0], iu[1]]
    b = b - b.transpose(0, 2, 1)
    top = np.concatenate([a, b], axis=2)
    bottom = np.concatenate([-b.conj(), a.conj()], axis=2)
    return np.concatenate([top, bottom], axis=1)


def tridiagonalize(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a batch of Hermitian matrices.

    Returns the real diagonal (b, n) and the off-diagonal magnitudes (b, n-1).
    """
    a = np.array(h, dtype=complex if np.iscomplexobj(h) else float, copy=True)
    batch, n = a.shape[0], a.shape[-1]
    off = np.zeros((batch, max(n - 1, 0)))
    for k in range(n - 2):
        x = a[:, k + 1:, k]
        norm = np.linalg.norm(x, axis=1)
        x0 = x[:, 0]
        phase = np.where(np.abs(x0) > 0, x0 / np.where(np.abs(x0) > 0, np.abs(x0), 1.0), 1.0)
        v = x.copy()
        v[:, 0] += phase * norm
        vnorm = np.linalg.norm(v, axis=1)
        live = vnorm > 0
        v /= np.where(live, vnorm, 1.0)[:, None]
        s = a[:, k + 1:, k + 1:]
        p = np.matmul(s, v[:, :, None])[:, :, 0]
        vp = np.einsum("bi,bi->b", v.conj(), p)
        w = p - vp[:, None] * v
        left = np.stack([v, w], axis=2)
        right = np.stack([w, v], axis=1).conj()
        s -= 2.0 * np.matmul(left, right)
        off[:, k] = norm
    if n >= 2:
        off[:, n - 2] = np.abs(a[:, n - 1, n - 2])
    diag = np.real(np.diagonal(a, axis1=1, axis2=2)).copy()
    return diag, off


def sturm_count(diag: np.ndarray, off: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below ``lam`` for each tridiagonal in the batch."""
    tiny = np.finfo(float).tiny
    e2 = off**2
    q = diag[:, 0] - lam
    count = (q < 0).astype(int)
    for i in range(1, diag.shape[1]):
        q = np.where(q == 0.0, tiny, q)
        q = diag[:, i] - lam - e2[:, i - 1] / q
        count += q < 0
    return count


def largest_eigenvalue(diag: np.ndarray, off: np.ndarray, iters: int = BISECT_ITERS) -> np.ndarray:
    """lambda_max of each symmetric tridiagonal by Sturm bisection."""
    diag = np.atleast_2d(diag)
    off = np.atleast_2d(off).reshape(diag.shape[0], -1)
    n = diag.shape[1]
    radius = np.zeros_like(diag)
    radius[:, :-1] += np.abs(off)
    radius[:, 1:] += np.abs(off)
    hi = np.max(diag + radius, axis=1) + 1e-12
    lo = np.min(diag - radius, axis=1) - 1e-12
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        all_below = sturm_count(diag, off, mid) == n
        hi = np.where(all_below, mid, hi)
        lo = np.where(all_below, lo, mid)
    return 0.5 * (lo + hi)


def _lambda_max_block(spec: EnsembleSpec):
    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        mats = gaussian_matrices(spec, size, rng)
        d, e = tridiagonalize(mats)
        # GSE eigenvalues come in Kramers pairs; the top of the pair is lambda_max
        return largest_eigenvalue(d, e)

    return draw


def edge_scale(lam_max, N: int):
    return (np.asarray(lam_max) - math.sqrt(2.0 * N)) * math.sqrt(2.0) * N ** (1.0 / 6.0)


def sample_lambda_max(spec: EnsembleSpec, reps: int, seed: int = DEFAULT_SEED) -> SampleBatch:
    """Unscaled largest eigenvalues."""
    values = map_blocks(seed, spec.tag, reps, _lambda_max_block(spec))
    return SampleBatch(values, seed, f"{spec.tag}-lambda-max", {"beta": spec.beta, "N": spec.N})


def sample_gaussian_edge(spec: EnsembleSpec, reps: int, seed: int = DEFAULT_SEED) -> SampleBatch:
    """(lambda_max - sqrt(2N)) sqrt(2) N^(1/6) over ``reps`` draws."""
    if spec.N < 2:
        raise ValueError("edge scaling needs N >= 2")
    raw = sample_lambda_max(spec, reps, seed)
    return SampleBatch(edge_scale(raw.values, spec.N), seed, f"{spec.tag}-edge", raw.meta)


def sample_gaussian_spectra(spec: EnsembleSpec, reps: int, seed: int = DEFAULT_SEED) -> SampleBatch:
    """Full sorted spectra, shape (reps, N); GSE pairs reduced to one member."""

    def draw(rng, size):
        lam = np.linalg.eigvalsh(gaussian_matrices(spec, size, rng))
        return lam[:, 1::2] if spec.beta == 4 else lam

    values = map_blocks(seed, spec.tag + "-spectra", reps, draw)
    return SampleBatch(values, seed, f"{spec.tag}-spectra", {"beta": spec.beta, "N": spec.N})


# --- log-gases -------------------------------------------------------------

@dataclass(frozen=True)
class LogGasConfig:
    """Weight exp(-eta * s * sum V(lambda_j)) prod |lambda_j - lambda_k|^beta.

    ``coeffs`` holds t_1 .. t_2m of V(lambda) = sum_k t_k lambda^k; s is N
    when ``n_scaled`` is set and 1 otherwise.
    """

    beta: int
    N: int
    coeffs: tuple[float, ...]
    eta: float | None = None
    n_scaled: bool = False

    def __post_init__(self):
        if self.beta not in BETAS:
            raise ValueError(f"beta must be one of {BETAS}, got {self.beta}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        c = tuple(float(v) for v in self.coeffs)
        if len(c) == 0 or len(c) % 2 or not c[-1] > 0:
            raise ValueError("potential must have even degree with positive leading coefficient")
        object.__setattr__(self, "coeffs", c)
        if self.eta is None:
            object.__setattr__(self, "eta", ETA[self.beta])

    @property
    def strength(self) -> float:
        return self.eta * (self.N if self.n_scaled else 1.0)

    def potential(self, lam):
        lam = np.asarray(lam, dtype=float)
        # coeffs start at t_1, so evaluate lam * (t_1 + t_2 lam + ...)
        return lam * np.polynomial.polynomial.polyval(lam, self.coeffs)

    def log_weight(self, lam) -> np.ndarray:
        """Unnormalized log density of configurations along the last axis."""
        lam = np.asarray(lam, dtype=float)
        diff = np.abs(lam[..., :, None] - lam[..., None, :])
        iu = np.triu_indices(lam.shape[-1], 1)
        inter = np.sum(np.log(diff[..., iu[0], iu[1]]), axis=-1)
        return -self.strength * np.sum(self.potential(lam), axis=-1) + self.beta * inter


def quartic_config(t: float, N: int, beta: int = 2) -> LogGasConfig:
    """V = lambda^4 / (4 t^2) + (1 - 2/t) lambda^2 with the N V scaling."""
    if not t > 0:
        raise ValueError(f"quartic parameter must be positive, got {t}")
    return LogGasConfig(beta, N, (0.0, 1.0 - 2.0 / t, 0.0, 1.0 / (4.0 * t * t)), n_scaled=True)


def metropolis_accept(log_ratio, uniform) -> np.ndarray:
    """Accept iff u < exp(log_ratio); the only acceptance rule used here."""
    return np.log(uniform) < log_ratio


def _site_delta(config: LogGasConfig, lam: np.ndarray, j: int, new: np.ndarray) -> np.ndarray:
    old = lam[:, j]
    others = np.delete(lam, j, axis=1)
    dv = config.potential(new) - config.potential(old)
    inter = np.sum(np.log(np.abs(new[:, None] - others)) - np.log(np.abs(old[:, None] - others)), axis=1)
    return -config.strength * dv + config.beta * inter


def metropolis_log_gas(
    config: LogGasConfig,
    sweeps: int = 400,
    reps: int = 1000,
    seed: int = DEFAULT_SEED,
    step: float | None = None,
) -> SampleBatch:
    """Independent random-walk Metropolis chains, one final state per chain.

    A sweep proposes a Gaussian move for each particle in turn.  Returns
    sorted configurations, shape (reps, N).
    """
    if sweeps < 50:
        raise ValueError(f"need at least 50 sweeps for burn-in, got {sweeps}")
    n = config.N
    spacing = 1.0 / n if config.n_scaled else 1.0 / math.sqrt(n)
    step = 0.8 * spacing if step is None else float(step)
    width = 1.0 if config.n_scaled else math.sqrt(2.0 * n)

    def run(rng: np.random.Generator, size: int) -> np.ndarray:
        lam = np.linspace(-0.5, 0.5, n)[None, :] * width + 0.01 * rng.standard_normal((size, n))
        accepted = 0
        for _ in range(sweeps):
            for j in range(n):
                new = lam[:, j] + step * rng.standard_normal(size)
                ok = metropolis_accept(_site_delta(config, lam, j, new), rng.random(size))
                lam[:, j] = np.where(ok, new, lam[:, j])
                accepted += int(ok.sum())
        out = np.sort(lam, axis=1)
        return np.concatenate([out, np.full((size, 1), accepted / (sweeps * n * size))], axis=1)

    tag = f"loggas-b{config.beta}-n{n}-{config.coeffs}-{config.n_scaled}-{sweeps}-{step}"
    raw = map_blocks(seed, tag, reps, run)
    meta = {"acceptance": float(np.mean(raw[:, -1])), "sweeps": sweeps, "step": step}
    return SampleBatch(raw[:, :-1], seed, tag, meta)


def discrete_metropolis_chain(log_weights: Sequence[float], steps: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Transition counts of a nearest-neighbour Metropolis walk on a finite lattice.

    Proposals off the ends are rejected.  ``counts[i, j]`` is the number of
    observed moves i -> j (including i -> i).
    """
    logw = np.asarray(log_weights, dtype=float)
    k = logw.size
    rng = generator(seed, f"discrete-metropolis-{k}")
    dirs = rng.choice(np.array([-1, 1]), size=steps)
    u = rng.random(steps)
    counts = np.zeros((k, k), dtype=np.int64)
    state = k // 2
    for d, uu in zip(dirs, u):
        prop = state + d
        nxt = state
        if 0 <= prop < k and metropolis_accept(logw[prop] - logw[state], uu):
            nxt = prop
        counts[state, nxt] += 1
        state = nxt
    return counts


# --- longest increasing subsequence ---------------------------------------

def patience_lis(seq) -> int:
    """Length of the longest strictly increasing subsequence (patience piles)."""
    tops: list = []
    for v in seq:
        i = bisect_left(tops, v)
        if i == len(tops):
            tops.append(v)
        else:
            tops[i] = v
    return len(tops)


def lis_scale(l, n: int):
    return (np.asarray(l, dtype=float) - 2.0 * math.sqrt(n)) / n ** (1.0 / 6.0)


def sample_lis(n: int, reps: int, seed: int = DEFAULT_SEED) -> SampleBatch:
    """l_n of uniform random permutations; scaled values in ``meta['scaled']``."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")

    def draw(rng, size):
        return np.array([patience_lis(rng.permutation(n).tolist()) for _ in range(size)], dtype=float)

    values = map_blocks(seed, f"lis-{n}", reps, draw)
    return SampleBatch(values, seed, f"lis-{n}", {"n": n, "scaled": lis_scale(values, n)})


# --- Brownian last passage -------------------------------------------------

def brownian_lpp(N: int, t: float = 1.0, n_steps: int = 4000, reps: int = 1000, seed: int = DEFAULT_SEED) -> SampleBatch:
    """M / sqrt(t) with M the last-passage value of N Brownian motions on [0, t].

    M = max over 0 <= s_1 <= ... <= s_{N-1} <= t of sum_k B_k(s_k) - B_k(s_{k-1}),
    with split points restricted to the time grid.  Level k satisfies
    H_k(i) = B_k(i) + max_{l <= i} (H_{k-1}(l) - B_k(l)).
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if n_steps < 1000:
        raise ValueError(f"need n_steps >= 1000, got {n_steps}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    dt = t / n_steps

    def draw(rng, size):
        # level 0 pins the first path to start at s_0 = 0
        h = np.full((size, n_steps + 1), -np.inf)
        h[:, 0] = 0.0
        for _ in range(N):
            b = np.zeros((size, n_steps + 1))
            np.cumsum(rng.normal(scale=math.sqrt(dt), size=(size, n_steps)), axis=1, out=b[:, 1:])
            h = b + np.maximum.accumulate(h - b, axis=1)
        return h[:, -1] / math.sqrt(t)

    tag = f"lpp-{N}-{t}-{n_steps}"
    return SampleBatch(map_blocks(seed, tag, reps, draw), seed, tag, {"N": N, "t": t, "n_steps": n_steps})
