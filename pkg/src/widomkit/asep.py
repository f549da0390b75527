"""Asymmetric simple exclusion on Z: simulation and exact transition probabilities.

Each particle carries a rate-one exponential clock; when it rings the
particle tries to step right with probability p and left with probability
q = 1 - p, and the move is suppressed if the target site is occupied.

The N-particle transition probability is the Bethe-ansatz permutation sum

    P_y(x; t) = sum_sigma (2 pi i)^-N  oint A_sigma
                prod_j xi_{sigma(j)}^{x_j - y_{sigma(j)} - 1} e^{eps(xi_j) t} dxi_j,

    eps(xi) = p / xi + q xi - 1,

where A_sigma is the product, over positions a < b with sigma(a) > sigma(b),
of S(xi_{sigma(a)}, xi_{sigma(b)}) and

    S(u, v) = -(p + q u v - u) / (p + q u v - v).

The contours are circles of common radius r inside the pole-free disc and
every integral is a periodic trapezoid sum on m nodes per circle.  The
reflection x -> -x with p and q swapped gives a second representation of
the same probability; each configuration is evaluated in whichever of the
two keeps the integrand, and hence the roundoff, smaller.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import stats

from ._random import DEFAULT_SEED, map_blocks
from .numerics import det_dense
from .rmt_samplers import SampleBatch

DEFAULT_FRACTION = 0.5
# nodes per circle by particle count; N! m^N bounds the work and 6 m^3 the
# N = 3 table, while aliasing decays like DEFAULT_FRACTION^m
NODES_BY_N = {1: 256, 2: 256, 3: 128}
LARGE_N_NODES = 64
DEFAULT_NODES = 256
MIN_NODES = 64
IMAG_TOL = 1e-10
# cap on permutations x grid points for the dense permutation sum
DENSE_COST_CAP = 2_000_000_000
# cap on stored entries (N! m^N complex values) of a transition table
TABLE_ENTRY_CAP = 20_000_000
WINDOW_EPS = 1e-12


class PoleMarginError(ValueError):
    """The contour radius reaches the poles of the A_sigma factors."""


class QuadratureError(ArithmeticError):
    """The contour sum left an imaginary residue above tolerance."""


class WindowError(RuntimeError):
    """A tracked particle felt the truncation of the initial data."""


# --- configuration ---------------------------------------------------------

@dataclass(frozen=True)
class Explicit:
    y: tuple[int, ...]

    def __post_init__(self):
        y = tuple(int(v) for v in self.y)
        if not y:
            raise ValueError("explicit initial data needs at least one particle")
        if any(a >= b for a, b in zip(y, y[1:])):
            raise ValueError(f"positions must be strictly increasing, got {y}")
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class Step:
    """Sites 1..width occupied; stands in for every positive site."""

    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be positive, got {self.width}")


@dataclass(frozen=True)
class Bernoulli:
    """Each of the sites 1..width occupied independently with probability rho."""

    rho: float
    width: int

    def __post_init__(self):
        if not 0 < self.rho <= 1:
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")
        if self.width < 1:
            raise ValueError(f"width must be positive, got {self.width}")


Initial = Union[Explicit, Step, Bernoulli]


@dataclass(frozen=True)
class AsepConfig:
    p: float
    initial: Initial

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def gamma(self) -> float:
        return self.q - self.p

    @property
    def truncated(self) -> bool:
        return not isinstance(self.initial, Explicit)


@dataclass
class AsepState:
    positions: np.ndarray
    time: float
    trajectory: list[tuple[float, np.ndarray]] | None = field(default=None, repr=False)


# --- simulation ------------------------------------------------------------

GHOST_OFFSET = 1 << 40


def _initial_positions(config: AsepConfig, size: int, rng: np.random.Generator):
    """Positions (size, n), ghost mask, and the initial contamination flags."""
    init = config.initial
    if isinstance(init, Explicit):
        pos = np.tile(np.array(init.y, dtype=np.int64), (size, 1))
        ghost = np.zeros(pos.shape, dtype=bool)
        return pos, ghost, np.zeros(pos.shape, dtype=bool)
    if isinstance(init, Step):
        pos = np.tile(np.arange(1, init.width + 1, dtype=np.int64), (size, 1))
        ghost = np.zeros(pos.shape, dtype=bool)
    else:
        occ = rng.random((size, init.width)) < init.rho
        counts = occ.sum(axis=1)
        n = max(int(counts.max()), 1)
        sites = np.arange(1, init.width + 1, dtype=np.int64)
        # occupied sites first, in order; padding slots become far-away ghosts
        order = np.argsort(~occ, axis=1, kind="stable")
        pos = np.take_along_axis(np.broadcast_to(sites, occ.shape), order, axis=1)[:, :n].copy()
        ghost = np.arange(n)[None, :] >= counts[:, None]
        pos[ghost] = GHOST_OFFSET + np.nonzero(ghost)[1]
    # the missing particles beyond the window sit to the right of the last one
    cont = ghost.copy()
    cont[:, -1] = True
    return pos, ghost, cont


def _evolve(config: AsepConfig, t_end: float, size: int, rng: np.random.Generator, record: bool = False):
    pos, ghost, cont = _initial_positions(config, size, rng)
    reps, n = pos.shape
    clock = np.zeros(reps)
    active = np.ones(reps, dtype=bool)
    path = [(0.0, pos[0].copy())] if record else None
    rows = np.arange(reps)
    while True:
        idx = rows[active]
        if idx.size == 0:
            break
        clock[idx] += rng.exponential(1.0 / n, size=idx.size)
        live = clock[idx] <= t_end
        active[idx[~live]] = False
        idx = idx[live]
        k = idx.size
        who = rng.integers(0, n, size=k)
        step = np.where(rng.random(k) < config.p, 1, -1)
        if k == 0:
            continue
        nb = who + step
        has_nb = (nb >= 0) & (nb < n)
        nbc = np.clip(nb, 0, n - 1)
        target = pos[idx, who] + step
        blocked = has_nb & (pos[idx, nbc] == target)
        move = ~blocked & ~ghost[idx, who]
        pos[idx[move], who[move]] = target[move]
        cont[idx, who] |= has_nb & cont[idx, nbc]
        if record and idx[0] == 0:
            path.append((float(clock[0]), pos[0].copy()))
    return pos, ghost, cont, path


def simulate(config: AsepConfig, t_end: float, seed: int = DEFAULT_SEED, record: bool = False) -> AsepState:
    """One trajectory up to ``t_end``; ``record`` keeps every event."""
    if not t_end >= 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end}")
    out = {}

    def run(rng, size):
        pos, ghost, _, path = _evolve(config, t_end, size, rng, record)
        out["path"] = path
        return pos[:, ~ghost[0]]

    pos = map_blocks(seed, f"asep-sim-{config}-{t_end}", 1, run)
    return AsepState(pos[0], float(t_end), out.get("path"))


def simulate_positions(config: AsepConfig, t_end: float, reps: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Final positions of ``reps`` independent runs with explicit initial data."""
    if not isinstance(config.initial, Explicit):
        raise ValueError("simulate_positions needs explicit initial data")
    if not t_end >= 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end}")

    def run(rng, size):
        return _evolve(config, t_end, size, rng)[0]

    return map_blocks(seed, f"asep-batch-{config}-{t_end}", reps, run)


def tracked_positions(config: AsepConfig, m: int, t_end: float, reps: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Position of the m-th left-most particle (1-based) at ``t_end``.

    Raises WindowError if any sampled particle was influenced by the cut
    at the right end of the initial window.
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")

    def run(rng, size):
        pos, ghost, cont, _ = _evolve(config, t_end, size, rng)
        if pos.shape[1] < m or np.any(ghost[:, m - 1]):
            raise WindowError(f"fewer than {m} particles in the initial window")
        if np.any(cont[:, m - 1]):
            raise WindowError("tracked particle reached the window edge; widen the window")
        return pos[:, m - 1].astype(float)

    return map_blocks(seed, f"asep-track-{config}-{m}-{t_end}", reps, run)


def limit_constants(m: int, t: float) -> tuple[float, float, float]:
    """(sigma, c1, c2) for sigma = m / t."""
    sigma = m / t
    if not 0 < sigma < 1:
        raise ValueError(f"sigma = m/t must lie in (0, 1), got {sigma}")
    root = math.sqrt(sigma)
    return sigma, -1.0 + 2.0 * root, sigma ** (-1.0 / 6.0) * (1.0 - root) ** (2.0 / 3.0)


def marginal_position_samples(config: AsepConfig, m: int, t: float, reps: int, seed: int = DEFAULT_SEED) -> SampleBatch:
    """(x_m(t / gamma) - c1 t) / (c2 t^(1/3)) over ``reps`` simulations."""
    if not config.gamma > 0:
        raise ValueError("limit-law scaling needs q > p")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    sigma, c1, c2 = limit_constants(m, t)
    raw = tracked_positions(config, m, t / config.gamma, reps, seed)
    scaled = (raw - c1 * t) / (c2 * t ** (1.0 / 3.0))
    meta = {"m": m, "t": t, "sigma": sigma, "c1": c1, "c2": c2, "raw": raw, "p": config.p}
    return SampleBatch(scaled, seed, f"asep-limit-{config}-{m}-{t}", meta)


# --- contour integrals -----------------------------------------------------

@dataclass(frozen=True)
class ContourSpec:
    radius: float
    m_nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if int(self.m_nodes) != self.m_nodes or self.m_nodes < MIN_NODES:
            raise ValueError(f"need at least {MIN_NODES} nodes, got {self.m_nodes}")

    def nodes(self) -> np.ndarray:
        return self.radius * np.exp(2j * np.pi * np.arange(self.m_nodes) / self.m_nodes)


def _check_rates(p: float, q: float | None) -> tuple[float, float]:
    q = 1.0 - p if q is None else float(q)
    if not (0 <= p <= 1 and 0 <= q <= 1) or abs(p + q - 1.0) > 1e-12:
        raise ValueError(f"rates must satisfy p, q >= 0 and p + q = 1, got {p}, {q}")
    return float(p), q


def _flip(v):
    return tuple(-a for a in reversed(v))


def pole_radius(p: float, q: float | None = None) -> float:
    """Radius of the certified pole-free disc for the formula with rates (p, q).

    |p + q u v - v| >= p - r - q r^2 on circles of radius r, positive for
    r below the root of r (1 + q r) = p.  Zero when p = 0, where the
    formula does not apply.
    """
    p, q = _check_rates(p, q)
    if q == 0:
        return p
    return (-1.0 + math.sqrt(1.0 + 4.0 * q * p)) / (2.0 * q)


def default_contour(
    p: float,
    q: float | None = None,
    n_particles: int = 1,
    fraction: float = DEFAULT_FRACTION,
    m_nodes: int | None = None,
) -> ContourSpec:
    """Default circle for the formula with rates (p, q), p > 0."""
    if m_nodes is None:
        m_nodes = NODES_BY_N.get(n_particles, LARGE_N_NODES)
    r = pole_radius(p, q)
    if r == 0:
        raise ValueError("the contour formula needs a positive right rate in its frame")
    return ContourSpec(fraction * r, m_nodes)


def pole_margin(contour: ContourSpec, p: float, q: float | None = None) -> float:
    """min |p + q u v - v| over the node torus."""
    p, q = _check_rates(p, q)
    xi = contour.nodes()
    return float(np.min(np.abs(p + q * xi[:, None] * xi[None, :] - xi[None, :])))


def _s_factor(u, v, p, q):
    return -(p + q * u * v - u) / (p + q * u * v - v)


def inversions(sigma: Sequence[int]) -> list[tuple[int, int]]:
    """Value pairs (sigma(a), sigma(b)) over positions a < b with sigma(a) > sigma(b)."""
    n = len(sigma)
    return [(sigma[a], sigma[b]) for a in range(n) for b in range(a + 1, n) if sigma[a] > sigma[b]]


def a_sigma(sigma: Sequence[int], xi, p: float, q: float | None = None, margin: float = 1e-12) -> complex:
    """A_sigma at the point ``xi`` (0-based permutation)."""
    p, q = _check_rates(p, q)
    xi = np.asarray(xi, dtype=complex)
    if sorted(sigma) != list(range(len(xi))):
        raise ValueError(f"{sigma} is not a permutation of 0..{len(xi) - 1}")
    out = 1.0 + 0j
    for a, b in inversions(sigma):
        den = p + q * xi[a] * xi[b] - xi[b]
        if abs(den) < margin:
            raise PoleMarginError(f"S factor denominator {abs(den):.2e} below margin")
        out *= _s_factor(xi[a], xi[b], p, q)
    return complex(out)


@dataclass(frozen=True)
class _Frame:
    """The formula evaluated directly or after the reflection x -> -x.

    Reflection swaps p and q.  Both frames give the same probability but
    roundoff differs: on the torus the integrand is bounded by
    r^(D - N) exp(N t (p / r + q r - 1)) with D the net displacement in
    the frame, so each configuration is evaluated where that bound is
    smaller.
    """

    mirrored: bool
    p: float
    q: float
    contour: ContourSpec

    def map(self, v):
        return _flip(v) if self.mirrored else tuple(v)

    def log_bound(self, y, x, t: float) -> float:
        r, n = self.contour.radius, len(y)
        d = sum(self.map(x)) - sum(self.map(y))
        return (d - n) * math.log(r) + n * t * (self.p / r + self.q * r - 1.0)


def _frames(p: float, q: float, n: int, contour: ContourSpec | None) -> list[_Frame]:
    """Frames where the contour is certified pole-free."""
    out = []
    for mirrored, (fp, fq) in ((False, (p, q)), (True, (q, p))):
        r = pole_radius(fp, fq)
        if r == 0:
            continue
        c = default_contour(fp, fq, n) if contour is None else contour
        if c.radius < r and pole_margin(c, fp, fq) > 1e-9:
            out.append(_Frame(mirrored, fp, fq, c))
    if not out:
        radius = contour.radius if contour is not None else float("nan")
        raise PoleMarginError(
            f"radius {radius:g} is outside the pole-free disc in both frames "
            f"(limits {pole_radius(p, q):g}, {pole_radius(q, p):g})"
        )
    return out


def _check_positions(y, x):
    y = tuple(int(v) for v in y)
    if any(a >= b for a, b in zip(y, y[1:])):
        raise ValueError(f"y must be strictly increasing, got {y}")
    if x is not None:
        x = tuple(int(v) for v in x)
        if len(x) != len(y):
            raise ValueError("x and y must have the same length")
        if any(a >= b for a, b in zip(x, x[1:])):
            raise ValueError(f"x must be strictly increasing, got {x}")
    if not y:
        raise ValueError("need at least one particle")
    if len(y) > 6:
        raise ValueError("the permutation sum is limited to N <= 6")
    return y, x


def _best_frame(frames: list[_Frame], y, x, t: float) -> _Frame:
    return min(frames, key=lambda f: f.log_bound(y, x, t))


@dataclass(frozen=True)
class TransitionResult:
    value: float
    imag: float
    method: str
    contour: ContourSpec


def _exponents(sigma, y, x):
    """Power of xi_k after absorbing d xi = i xi d theta: x_{sigma^-1(k)} - y_k."""
    e = [0] * len(y)
    for j, k in enumerate(sigma):
        e[k] = x[j] - y[k]
    return e


def _separable(xi, p, q):
    """Rank-1 split S(u_a, v_b) = f(a) g(b) on the node grid, if it exists."""
    s = _s_factor(xi[:, None], xi[None, :], p, q)
    u, sv, vh = np.linalg.svd(s)
    if sv[1] > 1e-13 * sv[0]:
        return None
    return u[:, 0] * sv[0], vh[0]


def _dense_sum(y, x, t, p, q, xi):
    n, m = len(y), xi.size
    if math.factorial(n) * m**n > DENSE_COST_CAP:
        raise ValueError(
            f"dense permutation sum needs {math.factorial(n) * m ** n:.1e} evaluations; "
            "reduce N or m_nodes"
        )
    growth = np.exp(t * (p / xi + q * xi - 1.0))
    s = _s_factor(xi[:, None], xi[None, :], p, q)
    total = 0j
    for sigma in itertools.permutations(range(n)):
        e = _exponents(sigma, y, x)
        vecs = [growth * xi ** e[k] for k in range(n)]
        pairs = inversions(sigma)
        # chunk over the first variable to bound memory at m^(n-1)
        for i0 in range(m):
            grid = vecs[0][i0] * np.ones((m,) * (n - 1), dtype=complex)
            for k in range(1, n):
                shape = [1] * (n - 1)
                shape[k - 1] = m
                grid = grid * vecs[k].reshape(shape)
            for a, b in pairs:
                grid = grid * _pair_slice(s, a, b, i0, n, m)
            total += grid.sum()
    return total / m**n


def _pair_slice(s, a, b, i0, n, m):
    """S(xi_a, xi_b) broadcast over the remaining n-1 variables with xi_0 fixed."""
    shape = [1] * (n - 1)
    if a == 0:
        shape[b - 1] = m
        return s[i0, :].reshape(shape)
    if b == 0:
        shape[a - 1] = m
        return s[:, i0].reshape(shape)
    shape[a - 1] = shape[b - 1] = m
    # axes run in variable order, so S(xi_a, xi_b) is transposed when a > b
    return (s if a < b else s.T).reshape(shape)


def _separable_sum(y, x, t, p, q, xi, split):
    f, g = split
    growth = np.exp(t * (p / xi + q * xi - 1.0))
    n = len(y)
    total = 0j
    for sigma in itertools.permutations(range(n)):
        e = _exponents(sigma, y, x)
        vecs = [growth * xi ** e[k] for k in range(n)]
        for a, b in inversions(sigma):
            vecs[a] = vecs[a] * f
            vecs[b] = vecs[b] * g
        total += np.prod([v.mean() for v in vecs])
    return total


def transition_probability(y, x, t, p, q=None, contour: ContourSpec | None = None, method: str = "auto") -> TransitionResult:
    """P_y(x; t) with its imaginary residue."""
    p, q = _check_rates(p, q)
    y, x = _check_positions(y, x)
    if not t >= 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if method not in ("auto", "dense", "separable"):
        raise ValueError(f"unknown method {method!r}")
    frame = _best_frame(_frames(p, q, len(y), contour), y, x, t)
    fy, fx, xi = frame.map(y), frame.map(x), frame.contour.nodes()
    split = _separable(xi, frame.p, frame.q) if method in ("auto", "separable") else None
    if method == "separable" and split is None:
        raise ValueError("the S factors are not separable at these rates")
    if split is not None:
        value, used = _separable_sum(fy, fx, t, frame.p, frame.q, xi, split), "separable"
    else:
        value, used = _dense_sum(fy, fx, t, frame.p, frame.q, xi), "dense"
    return TransitionResult(float(value.real), float(abs(value.imag)), used, frame.contour)


def exact_transition_probability(y, x, t, p, q=None, contour: ContourSpec | None = None, method: str = "auto") -> float:
    res = transition_probability(y, x, t, p, q, contour, method)
    if res.imag > IMAG_TOL:
        raise QuadratureError(f"imaginary residue {res.imag:.2e} exceeds {IMAG_TOL:.0e}")
    return res.value


class TransitionTable:
    """All P_y(x; t) for fixed y and t from one FFT per permutation and frame."""

    def __init__(self, y, t, p, q=None, contour: ContourSpec | None = None):
        p, q = _check_rates(p, q)
        self.y, _ = _check_positions(y, None)
        if not t >= 0:
            raise ValueError(f"t must be nonnegative, got {t}")
        self.t = float(t)
        self.frames = _frames(p, q, len(self.y), contour)
        for f in self.frames:
            entries = math.factorial(len(self.y)) * f.contour.m_nodes ** len(self.y)
            if entries > TABLE_ENTRY_CAP:
                raise ValueError(f"table needs {entries:.1e} entries (cap {TABLE_ENTRY_CAP:.0e}); reduce N or m_nodes")
        self._tables: dict[bool, dict] = {}

    def _build(self, frame: _Frame) -> dict:
        y, t, p, q = frame.map(self.y), self.t, frame.p, frame.q
        n, xi = len(y), frame.contour.nodes()
        axes = np.meshgrid(*([xi] * n), indexing="ij")
        base = np.ones(axes[0].shape, dtype=complex)
        for k in range(n):
            base *= np.exp(t * (p / axes[k] + q * axes[k] - 1.0)) * axes[k] ** (-y[k])
        tables = {}
        for sigma in itertools.permutations(range(n)):
            amp = np.ones_like(base)
            for a, b in inversions(sigma):
                amp *= _s_factor(axes[a], axes[b], p, q)
            tables[sigma] = np.fft.ifftn(amp * base)
        return tables

    def detail(self, x) -> tuple[float, float]:
        x = tuple(int(v) for v in x)
        frame = _best_frame(self.frames, self.y, x, self.t)
        if frame.mirrored not in self._tables:
            self._tables[frame.mirrored] = self._build(frame)
        fx, m = frame.map(x), frame.contour.m_nodes
        total = 0j
        for sigma, tab in self._tables[frame.mirrored].items():
            idx = [0] * len(fx)
            for j, k in enumerate(sigma):
                idx[k] = fx[j] % m
            total += tab[tuple(idx)]
        total *= frame.contour.radius ** sum(fx)
        return float(total.real), float(abs(total.imag))

    def __call__(self, x) -> float:
        return self.detail(x)[0]


def _poisson_cap(rate: float, eps: float) -> int:
    return int(stats.poisson.isf(eps, rate)) + 1 if rate > 0 else 0


def stochastic_window(y, t: float, p: float, eps: float = WINDOW_EPS) -> list[tuple[int, ...]]:
    """Ordered configurations reachable with plausible total displacement.

    Rightward and leftward totals are capped at the 1 - eps quantiles of
    Poisson(N p t) and Poisson(N q t), which bound the attempted jumps.
    """
    y = tuple(int(v) for v in y)
    n = len(y)
    kr, kl = _poisson_cap(n * p * t, eps), _poisson_cap(n * (1 - p) * t, eps)
    out = []
    for d in itertools.product(range(-kl, kr + 1), repeat=n):
        if sum(v for v in d if v > 0) > kr or -sum(v for v in d if v < 0) > kl:
            continue
        x = tuple(a + b for a, b in zip(y, d))
        if all(a < b for a, b in zip(x, x[1:])):
            out.append(x)
    return out


def window_sum(y, t: float, p: float, contour: ContourSpec | None = None) -> tuple[float, float, int]:
    """(sum of P over the window, largest imaginary residue, window size)."""
    table = TransitionTable(y, t, p, contour=contour)
    total, worst = 0.0, 0.0
    configs = stochastic_window(y, t, p)
    for x in configs:
        v, im = table.detail(x)
        total += v
        worst = max(worst, im)
    return total, worst, len(configs)


def tasep_determinant_probability(y, x, t: float, contour: ContourSpec | None = None) -> float:
    """P_y(x; t) at p = 1 as det[ oint (1 - xi)^(j-i) xi^(x_i - y_j - 1) e^{eps t} ]."""
    y = tuple(int(v) for v in y)
    x = tuple(int(v) for v in x)
    n = len(y)
    if len(x) != n or n > 12:
        raise ValueError("need len(x) == len(y) <= 12")
    if any(a >= b for a, b in zip(y, y[1:])) or any(a >= b for a, b in zip(x, x[1:])):
        raise ValueError("positions must be strictly increasing")
    if not t >= 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    contour = default_contour(1.0, n_particles=n) if contour is None else contour
    if not contour.radius < 1:
        raise PoleMarginError("the (1 - xi) factors need a radius below 1")
    xi = contour.nodes()
    growth = np.exp(t * (1.0 / xi - 1.0))
    c = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            v = np.mean((1.0 - xi) ** (j - i) * xi ** (x[i] - y[j]) * growth)
            if abs(v.imag) > IMAG_TOL:
                raise QuadratureError(f"entry ({i}, {j}) has imaginary residue {abs(v.imag):.2e}")
            c[i, j] = v.real
    return det_dense(c)
