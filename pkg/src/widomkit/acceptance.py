"""The acceptance suite, shared by ``widomkit selftest`` and the test-suite.

Each criterion is a function of the seed returning a ``CriterionResult``.
Seeded criteria also return a digest of every sampled array, and the
determinism criterion reruns them and compares digests.
"""

from __future__ import annotations

import hashlib
import math
import os
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import asep, distributions, fredholm, oracles
from ._random import DEFAULT_SEED, THREADS_ENV
from .fredholm import IntervalUnion, SineKernel
from .numerics import CONSTANTS, ks_distance, ks_two_sample
from .rmt_samplers import EnsembleSpec, brownian_lpp, sample_gaussian_edge, sample_lambda_max, sample_lis

# grid shared by criterion 1 and the tw-table defaults
TWO_ROUTE_GRID = np.arange(-8.0, 3.0 + 1e-9, 0.5)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    metrics: dict = field(default_factory=dict)
    digest: str | None = None
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:2d} {self.title}: {self.summary} ({self.seconds:.1f}s)"


def _digest(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(a)
        h.update(str(a.dtype).encode() + str(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()


@lru_cache(maxsize=None)
def _table(beta: int) -> distributions.DistTable:
    return distributions.tw_table(beta)


# --- analytic criteria -----------------------------------------------------

def two_route_agreement(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    det = distributions.f2_det(TWO_ROUTE_GRID)
    pii = distributions.tw_cdf(2, TWO_ROUTE_GRID)
    worst = float(np.max(np.abs(det - pii)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed <= 120
    return CriterionResult(1, "two-route F2", ok, f"max |det - painleve| = {worst:.2e} (tol 1e-6)",
                           {"max_abs_diff": worst, "seconds": elapsed})


def airy_tail_constant(seed: int = DEFAULT_SEED) -> CriterionResult:
    c0 = CONSTANTS.c0_airy
    r7, r10, r12 = (distributions.tail_residual_airy(t) for t in (-7.0, -10.0, -12.0))
    gap10 = abs(r10 - c0)
    closer = abs(r12 - c0) < abs(r7 - c0)
    ok = gap10 <= 1e-2 and closer
    summary = (f"|res(-10) - c0| = {gap10:.2e} (tol 1e-2); |res(-12) - c0| = {abs(r12 - c0):.2e} "
               f"< |res(-7) - c0| = {abs(r7 - c0):.2e}: {closer}")
    return CriterionResult(2, "Airy tail constant", ok, summary,
                           {"res_-7": r7, "res_-10": r10, "res_-12": r12, "c0_airy": c0})


def sine_tail_constant(seed: int = DEFAULT_SEED) -> CriterionResult:
    c0 = CONSTANTS.c0_sine
    res = distributions.tail_residual_sine(10.0)
    deriv = distributions.log_derivative_gap(10.0)
    ok = abs(res - c0) <= 1e-2 and abs(deriv + 10.0) <= 0.5
    summary = f"|res(10) - c0| = {abs(res - c0):.2e} (tol 1e-2); d/dx ln P at 10 = {deriv:.4f} (within 0.5 of -10)"
    return CriterionResult(3, "sine tail constant", ok, summary, {"residual": res, "c0_sine": c0, "log_derivative": deriv})


def small_x_series(seed: int = DEFAULT_SEED) -> CriterionResult:
    gaps = {}
    for x in (1e-3, 1e-2):
        gaps[x] = abs(distributions.sine_gap_probability(x) - (1.0 - 2.0 * x / math.pi))
    ok = all(g <= 5 * x * x for x, g in gaps.items())
    summary = ", ".join(f"x={x:g}: {g:.2e} <= {5 * x * x:.0e}" for x, g in gaps.items())
    return CriterionResult(4, "small-x series", ok, summary, {str(k): v for k, v in gaps.items()})


def nystrom_self_convergence(seed: int = DEFAULT_SEED) -> CriterionResult:
    n = fredholm.DEFAULT_NODES
    t_grid = distributions._grid(*distributions.DEFAULT_TW_GRID)
    airy = max(abs(fredholm.semi_infinite_det(t, n) - fredholm.semi_infinite_det(t, 2 * n)) for t in t_grid)
    x_grid = distributions._grid(*distributions.DEFAULT_SINE_GRID)
    unit = distributions.UNIT_INTERVAL
    sine = max(
        abs(fredholm.nystrom_det(SineKernel(x), unit, n) - fredholm.nystrom_det(SineKernel(x), unit, 2 * n))
        for x in x_grid
    )
    worst = max(airy, sine)
    ok = worst <= 1e-10
    summary = f"max change on doubling: Airy {airy:.1e}, sine {sine:.1e} (tol 1e-10)"
    return CriterionResult(5, "Nystrom self-convergence", ok, summary, {"airy": airy, "sine": sine})


# --- sampling criteria -----------------------------------------------------

def gue_edge(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    batch = sample_gaussian_edge(EnsembleSpec(2, 100), 5000, seed)
    ks = ks_distance(batch.values, _table(2))
    elapsed = time.perf_counter() - start
    ok = ks <= 0.05 and elapsed <= 300
    return CriterionResult(6, "GUE edge", ok, f"KS to F2 = {ks:.4f} (tol 0.05)",
                           {"ks": ks, "seconds": elapsed}, _digest(batch.values))


def lis_limit(seed: int = DEFAULT_SEED) -> CriterionResult:
    n = 10_000
    batch = sample_lis(n, 2000, seed)
    ratio = batch.mean / math.sqrt(n)
    ks = ks_distance(batch.meta["scaled"], _table(2))
    ok = abs(ratio - 2.0) <= 0.1 and ks <= 0.10
    return CriterionResult(7, "LIS", ok, f"mean/sqrt(n) = {ratio:.4f} (within 0.1 of 2); KS to F2 = {ks:.4f} (tol 0.10)",
                           {"ratio": ratio, "ks": ks}, _digest(batch.values))


def brownian_last_passage(seed: int = DEFAULT_SEED) -> CriterionResult:
    lpp = brownian_lpp(10, 1.0, 4000, 2000, seed)
    gue = sample_lambda_max(EnsembleSpec(2, 10), 2000, seed)
    # the GUE above has E|H_ij|^2 = 1/2; last passage matches unit variance entries
    ks = ks_two_sample(lpp.values, math.sqrt(2.0) * gue.values)
    ok = ks <= 0.06
    summary = (f"two-sample KS = {ks:.4f} (tol 0.06); means {lpp.mean:.4f} vs {math.sqrt(2.0) * gue.mean:.4f}")
    return CriterionResult(8, "Brownian last passage", ok, summary,
                           {"ks": ks, "lpp_mean": lpp.mean, "gue_mean": math.sqrt(2.0) * gue.mean},
                           _digest(lpp.values, gue.values))


def asep_exact(seed: int = DEFAULT_SEED) -> CriterionResult:
    p = 0.3
    oracle_err = 0.0
    for y, x, t in [(0, -1, 1.0), (0, 0, 1.0), (2, 5, 1.7), (0, -4, 2.0), (-3, -3, 0.4)]:
        v = asep.exact_transition_probability([y], [x], t, p)
        oracle_err = max(oracle_err, abs(v - oracles.single_particle_series(y, x, t, p, 1 - p)))
    sums = {}
    for y, t in [((0,), 2.0), ((0, 1), 1.0), ((0, 1), 2.0), ((0, 1, 2), 1.0), ((0, 2, 3), 2.0)]:
        sums[(y, t)] = asep.window_sum(y, t, p)[0]
    sum_err = max(abs(s - 1.0) for s in sums.values())
    perturb = 0.0
    for y, x, t in [((0, 1), (-1, 2), 1.0), ((0, 1), (0, 1), 2.0), ((0, 2, 3), (-2, 1, 3), 2.0), ((0, 1, 2), (-1, 0, 3), 1.0)]:
        # default circle of the frame carrying the drift
        base = asep.default_contour(max(p, 1 - p), n_particles=len(y))
        ref = asep.exact_transition_probability(y, x, t, p, contour=base)
        half = asep.exact_transition_probability(y, x, t, p, contour=asep.ContourSpec(base.radius / 2, base.m_nodes))
        dbl = asep.exact_transition_probability(y, x, t, p, contour=asep.ContourSpec(base.radius, 2 * base.m_nodes))
        perturb = max(perturb, abs(half - ref), abs(dbl - ref))
    ok = oracle_err <= 1e-9 and sum_err <= 1e-8 and perturb <= 1e-9
    summary = (f"N=1 vs series {oracle_err:.1e} (tol 1e-9); window sums off by {sum_err:.1e} (tol 1e-8); "
               f"radius/node perturbation {perturb:.1e} (tol 1e-9)")
    return CriterionResult(9, "ASEP exact formula", ok, summary,
                           {"oracle_err": oracle_err, "window_sum_err": sum_err, "perturbation": perturb})


def tasep_determinant(seed: int = DEFAULT_SEED) -> CriterionResult:
    # fixed case generator, independent of the sampling seed
    rng = np.random.default_rng(20)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 6))
        y = np.sort(rng.choice(np.arange(-4, 5), n, replace=False))
        x = np.sort(rng.choice(np.arange(-2, 9), n, replace=False))
        t = float(rng.uniform(0.1, 2.0))
        a = asep.exact_transition_probability(y, x, t, 1.0)
        b = asep.tasep_determinant_probability(y, x, t)
        worst = max(worst, abs(a - b))
    ok = worst <= 1e-10
    return CriterionResult(10, "TASEP determinant", ok, f"max |perm - det| = {worst:.1e} over 20 cases (tol 1e-10)",
                           {"max_abs_diff": worst})


def exact_vs_simulation(seed: int = DEFAULT_SEED, reps: int = 100_000) -> CriterionResult:
    """Per-configuration frequencies against the exact law.

    Cells with expected count below 5 are pooled into one bin before the
    3-standard-error test; 1e-9 is allowed for quadrature error.
    """
    y, t, p = (0, 1), 1.0, 0.3
    pos = asep.simulate_positions(asep.AsepConfig(p, asep.Explicit(y)), t, reps, seed)
    counts = Counter(map(tuple, pos.tolist()))
    table = asep.TransitionTable(y, t, p)
    window = asep.stochastic_window(y, t, p)
    probs = {x: table(x) for x in window}

    def z_ok(freq: float, prob: float) -> bool:
        pc = min(max(prob, 0.0), 1.0)
        return abs(freq - prob) <= 3.0 * math.sqrt(pc * (1 - pc) / reps) + 1e-9

    big = [x for x in window if reps * probs[x] >= 5]
    rare = [x for x in window if reps * probs[x] < 5]
    outside = reps - sum(counts.get(x, 0) for x in window)
    bad = [x for x in big if not z_ok(counts.get(x, 0) / reps, probs[x])]
    rare_prob = sum(max(probs[x], 0.0) for x in rare)
    rare_freq = (sum(counts.get(x, 0) for x in rare) + outside) / reps
    rare_ok = z_ok(rare_freq, rare_prob)
    literal = sum(not z_ok(counts.get(x, 0) / reps, probs[x]) for x in window)
    ok = not bad and rare_ok
    summary = (f"{len(big)} cells + pooled rare bin ({len(rare)} cells): {len(bad)} outside 3 SE, "
               f"rare bin ok: {rare_ok}; unpooled per-cell misses: {literal}")
    return CriterionResult(11, "exact vs simulation", ok, summary,
                           {"cells": len(big), "bad": len(bad), "rare_ok": rare_ok, "unpooled_misses": literal},
                           _digest(pos))


def asep_limit_law(seed: int = DEFAULT_SEED) -> CriterionResult:
    t, sigma, reps = 100.0, 0.25, 2000
    m = int(round(sigma * t))
    width = int(4 * t)
    step = asep.marginal_position_samples(asep.AsepConfig(0.0, asep.Step(width)), m, t, reps, seed)
    ks_step = ks_distance(step.values, _table(2))
    bern = asep.marginal_position_samples(asep.AsepConfig(0.0, asep.Bernoulli(0.5, width)), m, t, reps, seed)
    f1 = _table(1)
    ks_bern = ks_distance(bern.values, lambda s: f1(s) ** 2)
    ok = ks_step <= 0.15 and ks_bern <= 0.20
    summary = f"step KS to F2 = {ks_step:.4f} (tol 0.15); Bernoulli KS to F1^2 = {ks_bern:.4f} (tol 0.20)"
    return CriterionResult(12, "ASEP limit law", ok, summary, {"ks_step": ks_step, "ks_bernoulli": ks_bern},
                           _digest(step.values, bern.values))


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: two_route_agreement,
    2: airy_tail_constant,
    3: sine_tail_constant,
    4: small_x_series,
    5: nystrom_self_convergence,
    6: gue_edge,
    7: lis_limit,
    8: brownian_last_passage,
    9: asep_exact,
    10: tasep_determinant,
    11: exact_vs_simulation,
    12: asep_limit_law,
}
SEEDED = (6, 7, 8, 11, 12)


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    res = CRITERIA[number](seed)
    return CriterionResult(res.number, res.title, res.passed, res.summary, res.metrics, res.digest,
                           time.perf_counter() - start)


def determinism(first: dict[int, CriterionResult], seed: int = DEFAULT_SEED) -> CriterionResult:
    """Rerun the seeded criteria single-threaded and compare digests."""
    start = time.perf_counter()
    saved = os.environ.get(THREADS_ENV)
    os.environ[THREADS_ENV] = "1"
    try:
        mismatched = [n for n in SEEDED if CRITERIA[n](seed).digest != first[n].digest]
    finally:
        if saved is None:
            os.environ.pop(THREADS_ENV, None)
        else:
            os.environ[THREADS_ENV] = saved
    ok = not mismatched
    summary = f"{len(SEEDED)} seeded criteria rerun with 1 thread; mismatched digests: {mismatched or 'none'}"
    return CriterionResult(13, "determinism", ok, summary, {"mismatched": mismatched}, None,
                           time.perf_counter() - start)


def run_all(seed: int = DEFAULT_SEED, numbers=None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    numbers = sorted(CRITERIA) + [13] if numbers is None else sorted(numbers)
    results: dict[int, CriterionResult] = {}
    for n in numbers:
        if n == 13:
            missing = [k for k in SEEDED if k not in results]
            for k in missing:
                results[k] = run_criterion(k, seed)
            res = determinism(results, seed)
        else:
            res = run_criterion(n, seed)
        results[n] = res
        if echo is not None:
            echo(res.line())
    return [results[n] for n in numbers]
