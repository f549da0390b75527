"""User-facing distribution tables and the asymptotic-constant diagnostics.

Tracy-Widom CDFs come either from the Airy determinant (beta = 2 only) or
from the Painleve transforms (beta = 1, 2, 4).  Gap probabilities of the
sine process come from the Nystrom determinant.  The tail residuals

    ln P_x + x^2/2 + ln(x)/4          (sine, x -> inf)
    ln F2(t) - t^3/12 + ln(-t)/8      (Airy, t -> -inf)

tend to the constants ``CONSTANTS.c0_sine`` and ``CONSTANTS.c0_airy``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import fredholm, painleve
from .fredholm import IntervalUnion, SineKernel

DEFAULT_TW_GRID = (-10.0, 5.0, 0.05)
DEFAULT_SINE_GRID = (0.1, 12.0, 0.1)
DERIV_STEP = 1e-3
DERIV_TOL = 1e-6
MONOTONE_SLACK = 1e-9

UNIT_INTERVAL = IntervalUnion.single(-1.0, 1.0)


class Provenance(enum.Enum):
    DETERMINANT = "determinant"
    PAINLEVE = "painleve"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class DistTable:
    """Values of a CDF (or, with ``kind="pdf"``, a density) on a uniform grid."""

    grid: np.ndarray
    values: np.ndarray
    provenance: Provenance
    meta: dict[str, Any] = field(default_factory=dict)
    kind: str = "cdf"

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if grid.size >= 2 and np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.kind == "cdf":
            if np.any(values <= 0) or np.any(values > 1 + MONOTONE_SLACK):
                raise ValueError("CDF values must lie in (0, 1]")
            if np.any(np.diff(values) < -MONOTONE_SLACK):
                raise ValueError("CDF values must be nondecreasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def cdf(self) -> np.ndarray:
        return self.values

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        d = np.diff(self.grid)
        return bool(np.all(np.abs(d - d[0]) <= rtol * abs(d[0])))

    def __call__(self, t):
        """Linear interpolation, clamped to the end values outside the grid."""
        return np.interp(t, self.grid, self.values)


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    if not step > 0 or not stop > start:
        raise ValueError(f"bad grid ({start}, {stop}, {step})")
    # endpoint included when it lies on the lattice, never overshot
    n = int(math.floor((stop - start) / step + 1e-9))
    return start + step * np.arange(n + 1)


# --- Tracy-Widom -----------------------------------------------------------

def f2_det(t, n: int = fredholm.DEFAULT_NODES):
    """F2 via the Airy determinant, scalar or elementwise."""
    if np.ndim(t) == 0:
        return fredholm.semi_infinite_det(float(t), n)
    return np.array([fredholm.semi_infinite_det(float(s), n) for s in np.ravel(t)]).reshape(np.shape(t))


_PAINLEVE_CDF = {1: painleve.f1, 2: painleve.f2_painleve, 4: painleve.f4}


def tw_cdf(beta: int, t, profile: painleve.HMProfile | None = None):
    if beta not in _PAINLEVE_CDF:
        raise ValueError(f"beta must be 1, 2 or 4, got {beta}")
    return _PAINLEVE_CDF[beta](t, profile)


def tw_table(
    beta: int = 2,
    start: float = DEFAULT_TW_GRID[0],
    stop: float = DEFAULT_TW_GRID[1],
    step: float = DEFAULT_TW_GRID[2],
    method: str = "painleve",
) -> DistTable:
    grid = _grid(start, stop, step)
    if method == "painleve":
        values = np.asarray(tw_cdf(beta, grid), dtype=float)
        prov = Provenance.PAINLEVE
    elif method == "determinant":
        if beta != 2:
            raise ValueError("the determinant route is only available for beta = 2")
        values = f2_det(grid)
        prov = Provenance.DETERMINANT
    else:
        raise ValueError(f"unknown method {method!r}")
    return DistTable(grid, values, prov, {"beta": beta, "step": step, "method": method})


def log_f2(t: float, route: str = "painleve") -> float:
    if route == "painleve":
        return float(painleve.log_f2_painleve(t))
    if route == "determinant":
        return fredholm.semi_infinite_logdet(t)
    raise ValueError(f"unknown route {route!r}")


def tail_residual_airy(t: float, route: str = "painleve") -> float:
    """ln F2(t) - t^3/12 + ln(-t)/8.

    The default uses the Painleve route: below t = -9 the Airy determinant
    loses relative accuracy to cancellation in double precision.
    """
    if not t <= -6:
        raise ValueError(f"tail residual needs t <= -6, got {t}")
    return log_f2(t, route) - t**3 / 12.0 + math.log(-t) / 8.0


# --- sine kernel -----------------------------------------------------------

def log_sine_gap(x: float, domain: IntervalUnion = UNIT_INTERVAL, n: int = fredholm.DEFAULT_NODES) -> float:
    return fredholm.nystrom_logdet(SineKernel(x), domain, n)


def sine_gap_probability(x: float, domain: IntervalUnion = UNIT_INTERVAL, n: int = fredholm.DEFAULT_NODES) -> float:
    """det(1 - K_sine) with parameter x on ``domain``."""
    return math.exp(log_sine_gap(x, domain, n))


def sine_gap_table(
    start: float = DEFAULT_SINE_GRID[0],
    stop: float = DEFAULT_SINE_GRID[1],
    step: float = DEFAULT_SINE_GRID[2],
    domain: IntervalUnion = UNIT_INTERVAL,
) -> DistTable:
    """P_x against x; a survival-type curve, stored with ``kind="gap"``."""
    grid = _grid(start, stop, step)
    values = np.array([sine_gap_probability(x, domain) for x in grid])
    return DistTable(grid, values, Provenance.DETERMINANT, {"domain": domain.intervals}, kind="gap")


def tail_residual_sine(x: float, n: int = fredholm.DEFAULT_NODES) -> float:
    """ln P_x + x^2/2 + ln(x)/4 on the interval (-1, 1)."""
    if not x >= 4:
        raise ValueError(f"tail residual needs x >= 4, got {x}")
    return log_sine_gap(x, UNIT_INTERVAL, n) + x * x / 2.0 + math.log(x) / 4.0


def _central(f, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


def log_derivative_pair(x: float, domain: IntervalUnion = UNIT_INTERVAL, h: float = DERIV_STEP) -> tuple[float, float]:
    """Central differences of ln P_x at steps h and h/2."""
    f = lambda s: log_sine_gap(s, domain)  # noqa: E731
    return _central(f, x, h), _central(f, x, h / 2.0)


def log_derivative_gap(
    x: float,
    domain: IntervalUnion = UNIT_INTERVAL,
    h: float = DERIV_STEP,
    tol: float = DERIV_TOL,
) -> float:
    """d/dx ln P_x by central differences.

    The step is halved until the h and h/2 stencils agree to ``tol``.
    """
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    h = min(h, x / 4.0)
    for _ in range(6):
        coarse, fine = log_derivative_pair(x, domain, h)
        if abs(coarse - fine) <= tol:
            return fine
        h /= 2.0
    raise ArithmeticError(f"log-derivative did not settle: {coarse} vs {fine}")


@dataclass(frozen=True)
class OscillationScan:
    x: np.ndarray
    derivative: np.ndarray
    slope: float
    intercept: float
    residual: np.ndarray

    @property
    def max_abs_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))


def gap_oscillation_scan(x_grid, domain: IntervalUnion) -> OscillationScan:
    """Log-derivative over ``x_grid`` with its least-squares linear trend removed."""
    x = np.asarray(x_grid, dtype=float)
    d = np.array([log_derivative_gap(s, domain) for s in x])
    slope, intercept = np.polyfit(x, d, 1)
    return OscillationScan(x, d, float(slope), float(intercept), d - (slope * x + intercept))


def pdf_via_diff(table: DistTable) -> DistTable:
    """Density by central differences (one-sided at the ends)."""
    if table.grid.size < 3 or not table.is_uniform():
        raise ValueError("pdf_via_diff needs a uniform grid with at least 3 points")
    dens = np.gradient(table.values, table.step)
    meta = dict(table.meta, derived_from=table.kind)
    return DistTable(table.grid, dens, table.provenance, meta, kind="pdf")


def integrate_table(table: DistTable) -> float:
    """Trapezoid integral of the tabulated values."""
    v, h = table.values, table.step
    return float(h * (v.sum() - 0.5 * (v[0] + v[-1])))
