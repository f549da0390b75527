"""Shared numerical primitives.

Gauss-Legendre rules, the Airy function, dense determinants and solves,
the zeta-derived asymptotic constants, and Kolmogorov-Smirnov distances.
Everything here is pure and safe to call from several threads at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import linalg, special

__all__ = [
    "QuadratureRule",
    "Constants",
    "CONSTANTS",
    "ZETA_PRIME_MINUS_ONE",
    "gauss_legendre",
    "airy_ai",
    "airy_ai_prime",
    "airy_bi",
    "airy_bi_prime",
    "zeta_prime_minus_one",
    "det_dense",
    "logdet_dense",
    "solve_dense",
    "ks_distance",
    "ks_two_sample",
]

# zeta'(-1) = 1/12 - ln(Glaisher's constant); reproduced by
# widomkit.oracles.zeta_prime_minus_one_oracle (Euler-Maclaurin).
ZETA_PRIME_MINUS_ONE = -0.16542114370045092


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@dataclass(frozen=True)
class Constants:
    zeta_prime_minus_one: float
    c0_sine: float
    c0_airy: float


def zeta_prime_minus_one() -> float:
    return ZETA_PRIME_MINUS_ONE


CONSTANTS = Constants(
    zeta_prime_minus_one=ZETA_PRIME_MINUS_ONE,
    c0_sine=math.log(2.0) / 12.0 + 3.0 * ZETA_PRIME_MINUS_ONE,
    c0_airy=math.log(2.0) / 24.0 + ZETA_PRIME_MINUS_ONE,
)


def gauss_legendre(n: int, interval: tuple[float, float] = (-1.0, 1.0)) -> QuadratureRule:
    """n-point Gauss-Legendre rule mapped affinely onto ``interval``.

    Exact for polynomials of degree <= 2n - 1.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"number of nodes must be a positive integer, got {n!r}")
    a, b = float(interval[0]), float(interval[1])
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"interval endpoints must be finite, got ({a}, {b})")
    if not a < b:
        raise ValueError(f"degenerate interval ({a}, {b}); need a < b")
    x, w = np.polynomial.legendre.leggauss(int(n))
    half = 0.5 * (b - a)
    return QuadratureRule(nodes=a + half * (x + 1.0), weights=half * w, interval=(a, b))


def _finite(z):
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("Airy function argument must be finite")
    return arr


def _unwrap(arr: np.ndarray, like):
    return float(arr) if np.ndim(like) == 0 else arr


def airy_ai(z):
    """Ai(z) for real finite z (scalar or array)."""
    arr = _finite(z)
    return _unwrap(special.airy(arr)[0], z)


def airy_ai_prime(z):
    arr = _finite(z)
    return _unwrap(special.airy(arr)[1], z)


def airy_bi(z):
    arr = _finite(z)
    return _unwrap(special.airy(arr)[2], z)


def airy_bi_prime(z):
    arr = _finite(z)
    return _unwrap(special.airy(arr)[3], z)


def _square(matrix) -> np.ndarray:
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def det_dense(matrix) -> float:
    """Determinant by LU with partial pivoting."""
    a = _square(matrix)
    if a.shape[0] == 0:
        return 1.0
    lu, piv = linalg.lu_factor(a, check_finite=False)
    swaps = np.count_nonzero(piv != np.arange(a.shape[0]))
    sign = -1.0 if swaps % 2 else 1.0
    return float(sign * np.prod(np.diag(lu)))


def logdet_dense(matrix) -> tuple[float, float]:
    """(sign, log|det|) from the LU diagonal; safe against underflow."""
    a = _square(matrix)
    if a.shape[0] == 0:
        return 1.0, 0.0
    lu, piv = linalg.lu_factor(a, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0.0):
        return 0.0, -math.inf
    swaps = np.count_nonzero(piv != np.arange(a.shape[0]))
    sign = (-1.0) ** swaps * np.prod(np.sign(diag))
    return float(sign), float(np.sum(np.log(np.abs(diag))))


def solve_dense(matrix, rhs) -> np.ndarray:
    a = _square(matrix)
    b = np.asarray(rhs, dtype=float)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"right-hand side has {b.shape[0]} rows, matrix has {a.shape[0]}")
    lu = linalg.lu_factor(a, check_finite=False)
    return linalg.lu_solve(lu, b, check_finite=False)


def ks_distance(samples, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Sup-norm distance between the empirical CDF of ``samples`` and ``cdf``.

    ``samples`` need not be pre-sorted. Ties are handled: the supremum is
    taken over both one-sided limits of the empirical step function.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("ks_distance needs at least one sample")
    f = np.clip(np.asarray(cdf(x), dtype=float), 0.0, 1.0)
    k = np.arange(1, n + 1)
    upper = np.max(k / n - f)
    lower = np.max(f - (k - 1) / n)
    return float(max(upper, lower, 0.0))


def ks_two_sample(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|."""
    xa = np.sort(np.asarray(a, dtype=float))
    xb = np.sort(np.asarray(b, dtype=float))
    if xa.size == 0 or xb.size == 0:
        raise ValueError("ks_two_sample needs two non-empty samples")
    pts = np.concatenate([xa, xb])
    fa = np.searchsorted(xa, pts, side="right") / xa.size
    fb = np.searchsorted(xb, pts, side="right") / xb.size
    return float(np.max(np.abs(fa - fb)))
