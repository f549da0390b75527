"""Hastings-McLeod solution of Painleve II and the Tracy-Widom transforms.

The solution of u'' = t u + 2 u^3 is computed as a two-point boundary-value
problem on [-L, R] with u(-L) = sqrt(L/2) and u(R) = Ai(R).  The interior
equations use the fourth-order Numerov stencil

    u[i+1] - 2 u[i] + u[i-1] = h^2/12 (f[i+1] + 10 f[i] + f[i-1]),
    f = t u + 2 u^3,

solved by damped Newton iteration on the tridiagonal Jacobian.  From u we
build

    F2(t) = exp(-int_t^inf (s - t) u(s)^2 ds)
    E(t)  = exp(-1/2 int_t^inf u(s) ds)
    F1(t) = sqrt(F2(t)) E(t)
    F4(t) = (E(t) + 1/E(t)) sqrt(F2(t)) / 2

F4 is evaluated exactly as written, without the sqrt(2) rescaling of the
argument that some references apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_banded

from .numerics import airy_ai, airy_ai_prime, gauss_legendre

DEFAULT_LEFT = 12.0
DEFAULT_RIGHT = 8.0
DEFAULT_POINTS = 4001
RESIDUAL_TOL = 1e-9

# 4-point Gauss-Legendre on (0, 1): exact for the degree-7 integrand s u^2
_GL4 = gauss_legendre(4, (0.0, 1.0))


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class HMProfile:
    grid: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray
    residual_sup: float
    newton_steps: int = 0
    # integrals from each grid node to +inf of u^2, s u^2, u
    tail_u2: np.ndarray = field(default=None, repr=False)
    tail_su2: np.ndarray = field(default=None, repr=False)
    tail_u: np.ndarray = field(default=None, repr=False)

    @property
    def left(self) -> float:
        return float(self.grid[0])

    @property
    def right(self) -> float:
        return float(self.grid[-1])

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def __call__(self, t):
        """u(t) by cubic Hermite interpolation of the grid solution."""
        t = np.asarray(t, dtype=float)
        i, tau = self._locate(t)
        h = self.step
        u0, u1 = self.u[i], self.u[i + 1]
        m0, m1 = self.u_prime[i], self.u_prime[i + 1]
        return _hermite(tau, u0, h * m0, u1, h * m1)

    def _locate(self, t: np.ndarray):
        if np.any(t < self.grid[0] - 1e-12) or np.any(t > self.grid[-1] + 1e-12):
            raise ValueError(
                f"t outside the profile grid [{self.left:g}, {self.right:g}]"
            )
        h = self.step
        i = np.clip(np.floor((t - self.grid[0]) / h).astype(int), 0, self.grid.size - 2)
        tau = (t - self.grid[i]) / h
        return i, tau

    def fd_residual(self) -> np.ndarray:
        """|u'' - t u - 2 u^3| with u'' from a sixth-order difference stencil.

        Independent of the Numerov equations the solver enforces; it only
        sees the grid values.
        """
        u, t, h = self.u, self.grid, self.step
        c = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
        upp = sum(c[k] * u[k: u.size - 6 + k] for k in range(7)) / h**2
        inner = slice(3, u.size - 3)
        return np.abs(upp - t[inner] * u[inner] - 2.0 * u[inner] ** 3)


def _hermite(tau, u0, d0, u1, d1):
    tau2 = tau * tau
    tau3 = tau2 * tau
    return (
        (2 * tau3 - 3 * tau2 + 1) * u0
        + (tau3 - 2 * tau2 + tau) * d0
        + (-2 * tau3 + 3 * tau2) * u1
        + (tau3 - tau2) * d1
    )


def _initial_guess(t: np.ndarray) -> np.ndarray:
    ai = airy_ai(t)
    left = np.maximum(ai, np.sqrt(np.maximum(-t, 0.0) / 2.0))
    ramp = np.clip((t + 1.0) / 2.0, 0.0, 1.0)
    return (1.0 - ramp) * left + ramp * ai


def _numerov_defect(u: np.ndarray, t: np.ndarray, h: float) -> np.ndarray:
    f = t * u + 2.0 * u**3
    return u[2:] - 2.0 * u[1:-1] + u[:-2] - h * h / 12.0 * (f[2:] + 10.0 * f[1:-1] + f[:-2])


def _derivative(u: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative; one-sided five-point stencils at the ends."""
    d = np.empty_like(u)
    d[2:-2] = (-u[4:] + 8.0 * u[3:-1] - 8.0 * u[1:-3] + u[:-4]) / (12.0 * h)
    d[0] = (-25 * u[0] + 48 * u[1] - 36 * u[2] + 16 * u[3] - 3 * u[4]) / (12.0 * h)
    d[1] = (-3 * u[0] - 10 * u[1] + 18 * u[2] - 6 * u[3] + u[4]) / (12.0 * h)
    d[-1] = (25 * u[-1] - 48 * u[-2] + 36 * u[-3] - 16 * u[-4] + 3 * u[-5]) / (12.0 * h)
    d[-2] = (3 * u[-1] + 10 * u[-2] - 18 * u[-3] + 6 * u[-4] - u[-5]) / (12.0 * h)
    return d


def _cell_integrals(a, h, u0, m0, u1, m1, lo, hi):
    """Integrals of (u^2, s u^2, u) of the Hermite cell interpolant over [lo, hi]."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    width = hi - lo
    s = lo[..., None] + width[..., None] * _GL4.nodes
    tau = (s - np.asarray(a)[..., None]) / h
    uu = _hermite(tau, u0[..., None], h * m0[..., None], u1[..., None], h * m1[..., None])
    w = width[..., None] * _GL4.weights
    return (
        np.sum(w * uu * uu, axis=-1),
        np.sum(w * s * uu * uu, axis=-1),
        np.sum(w * uu, axis=-1),
    )


def _airy_tails(r: float) -> tuple[float, float, float]:
    """Integrals over (r, inf) of Ai^2, s Ai^2 and Ai."""
    ai, aip = airy_ai(r), airy_ai_prime(r)
    i0 = aip * aip - r * ai * ai
    i1 = -(r * r * ai * ai - r * aip * aip + ai * aip) / 3.0
    rule = gauss_legendre(80, (r, r + 24.0))
    i2 = rule.integrate(airy_ai)
    return i0, i1, i2


def solve_hastings_mcleod(
    left: float = DEFAULT_LEFT,
    right: float = DEFAULT_RIGHT,
    n_points: int = DEFAULT_POINTS,
    max_iter: int = 60,
    step_tol: float = 1e-12,
) -> HMProfile:
    """Hastings-McLeod profile on the uniform grid [-left, right]."""
    if left < 6 or right < 6:
        raise ValueError(f"need left >= 6 and right >= 6, got {left}, {right}")
    if n_points < 400:
        raise ValueError(f"need at least 400 grid points, got {n_points}")

    t = np.linspace(-left, right, int(n_points))
    h = t[1] - t[0]
    u = _initial_guess(t)
    u[0] = math.sqrt(left / 2.0)
    u[-1] = airy_ai(right)

    c = h * h / 12.0
    norm = np.max(np.abs(_numerov_defect(u, t, h)))
    for steps in range(1, max_iter + 1):
        defect = _numerov_defect(u, t, h)
        dfdu = t + 6.0 * u * u
        bands = np.zeros((3, t.size - 2))
        bands[0, 1:] = 1.0 - c * dfdu[2:-1]
        bands[1] = -2.0 - 10.0 * c * dfdu[1:-1]
        bands[2, :-1] = 1.0 - c * dfdu[1:-2]
        du = solve_banded((1, 1), bands, -defect)
        # halve the step while it makes the defect worse
        lam = 1.0
        while True:
            trial = u.copy()
            trial[1:-1] += lam * du
            trial_norm = np.max(np.abs(_numerov_defect(trial, t, h)))
            if trial_norm <= norm or lam < 1e-4:
                break
            lam *= 0.5
        u, norm = trial, trial_norm
        if lam * np.max(np.abs(du)) <= step_tol:
            break
    else:
        raise ConvergenceError(f"Newton did not converge in {max_iter} iterations")

    residual = float(np.max(np.abs(_numerov_defect(u, t, h)))) / (h * h)
    if residual > RESIDUAL_TOL:
        raise ConvergenceError(f"collocation residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}")

    u_prime = _derivative(u, h)
    cells = _cell_integrals(
        t[:-1], h, u[:-1], u_prime[:-1], u[1:], u_prime[1:], t[:-1], t[1:]
    )
    tails = []
    for cell, tail in zip(cells, _airy_tails(right)):
        acc = np.empty(t.size)
        acc[-1] = tail
        acc[:-1] = tail + np.cumsum(cell[::-1])[::-1]
        tails.append(acc)

    return HMProfile(
        grid=t,
        u=u,
        u_prime=u_prime,
        residual_sup=residual,
        newton_steps=steps,
        tail_u2=tails[0],
        tail_su2=tails[1],
        tail_u=tails[2],
    )


@lru_cache(maxsize=1)
def default_profile() -> HMProfile:
    return solve_hastings_mcleod()


def tw_integrals(profile: HMProfile, t):
    """(q2, q1) with q2 = int_t^inf (s - t) u^2 ds and q1 = int_t^inf u ds."""
    t_arr = np.asarray(t, dtype=float)
    i, _ = profile._locate(t_arr)
    g, h = profile.grid, profile.step
    part = _cell_integrals(
        g[i], h, profile.u[i], profile.u_prime[i], profile.u[i + 1], profile.u_prime[i + 1],
        t_arr, g[i + 1],
    )
    j0 = part[0] + profile.tail_u2[i + 1]
    j1 = part[1] + profile.tail_su2[i + 1]
    q1 = part[2] + profile.tail_u[i + 1]
    q2 = j1 - t_arr * j0
    if np.ndim(t) == 0:
        return float(q2), float(q1)
    return q2, q1


def _profile(profile):
    return default_profile() if profile is None else profile


def f2_painleve(t, profile: HMProfile | None = None):
    q2, _ = tw_integrals(_profile(profile), t)
    return np.exp(-q2) if np.ndim(q2) else math.exp(-q2)


def log_f2_painleve(t, profile: HMProfile | None = None):
    q2, _ = tw_integrals(_profile(profile), t)
    return -q2


def e_factor(t, profile: HMProfile | None = None):
    _, q1 = tw_integrals(_profile(profile), t)
    return np.exp(-0.5 * q1) if np.ndim(q1) else math.exp(-0.5 * q1)


def f1(t, profile: HMProfile | None = None):
    q2, q1 = tw_integrals(_profile(profile), t)
    return np.exp(-0.5 * q2 - 0.5 * q1)


def f4(t, profile: HMProfile | None = None):
    q2, q1 = tw_integrals(_profile(profile), t)
    e = np.exp(-0.5 * q1)
    return 0.5 * (e + 1.0 / e) * np.exp(-0.5 * q2)
