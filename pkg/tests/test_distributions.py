from __future__ import annotations

import math

import numpy as np
import pytest

from widomkit import distributions as D
from widomkit import fredholm as F
from widomkit.numerics import CONSTANTS


# --- tables ------------------------------------------------------------------

def test_table_validation():
    with pytest.raises(ValueError):
        D.DistTable(np.array([0.0, 0.0]), np.array([0.1, 0.2]), D.Provenance.EMPIRICAL)
    with pytest.raises(ValueError):
        D.DistTable(np.array([0.0, 1.0]), np.array([0.5, 0.4]), D.Provenance.EMPIRICAL)
    with pytest.raises(ValueError):
        D.DistTable(np.array([0.0, 1.0]), np.array([0.5, 1.5]), D.Provenance.EMPIRICAL)


def test_default_grid():
    tab = D.tw_table(2)
    assert tab.grid[0] == -10 and tab.grid[-1] == pytest.approx(5.0)
    assert tab.is_uniform() and tab.step == pytest.approx(0.05)
    assert tab.provenance is D.Provenance.PAINLEVE


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_tables_monotone(beta):
    assert np.all(np.diff(D.tw_table(beta).values) >= 0)


def test_two_route_agreement():
    t = np.arange(-8.0, 3.0001, 0.5)
    assert np.max(np.abs(D.f2_det(t) - D.tw_cdf(2, t))) <= 1e-6
    det = D.tw_table(2, -8, 4, 0.05, method="determinant")
    assert det.provenance is D.Provenance.DETERMINANT


def test_bad_beta():
    with pytest.raises(ValueError):
        D.tw_cdf(3, 0.0)


@pytest.mark.parametrize(
    "beta, mean, var",
    [(1, -1.2065335745820, 1.6077810345810), (2, -1.7710868074116, 0.8131947928329),
     # the unscaled beta = 4 law is the usual one stretched by sqrt 2
     (4, -2.3068848932410 * math.sqrt(2), 0.5177237207726 * 2)],
)
def test_moments_match_literature(beta, mean, var):
    tab = D.tw_table(beta, -12, 8, 0.005)
    pdf = D.pdf_via_diff(tab)
    m = np.trapezoid(tab.grid * pdf.values, tab.grid)
    v = np.trapezoid(tab.grid**2 * pdf.values, tab.grid) - m * m
    assert m == pytest.approx(mean, abs=1e-6)
    assert v == pytest.approx(var, abs=5e-5)


def test_pdf_integrates_to_cdf_increment():
    tab = D.tw_table(2, -8, 4, 0.05)
    pdf = D.pdf_via_diff(tab)
    assert pdf.kind == "pdf"
    assert D.integrate_table(pdf) == pytest.approx(tab.values[-1] - tab.values[0], abs=1e-4)


def test_pdf_of_constant_segment_is_zero():
    grid = np.linspace(0, 1, 11)
    tab = D.DistTable(grid, np.full(11, 0.5), D.Provenance.EMPIRICAL)
    assert np.all(D.pdf_via_diff(tab).values == 0)


def test_pdf_mode():
    pdf = D.pdf_via_diff(D.tw_table(2, -6, 3, 0.01))
    assert pdf.grid[np.argmax(pdf.values)] == pytest.approx(-1.87, abs=0.02)


# --- tails -------------------------------------------------------------------

def test_airy_tail_residual():
    r10 = D.tail_residual_airy(-10.0)
    assert abs(r10 - CONSTANTS.c0_airy) <= 1e-2
    assert abs(D.tail_residual_airy(-12.0) - CONSTANTS.c0_airy) < abs(D.tail_residual_airy(-7.0) - CONSTANTS.c0_airy)


def test_airy_tail_requires_deep_tail():
    with pytest.raises(ValueError):
        D.tail_residual_airy(-2.0)


def test_log_f2_routes_agree_where_both_accurate():
    assert D.log_f2(-6.0, "determinant") == pytest.approx(D.log_f2(-6.0, "painleve"), abs=1e-8)


def test_sine_tail_residual():
    assert abs(D.tail_residual_sine(10.0) - CONSTANTS.c0_sine) <= 1e-2
    with pytest.raises(ValueError):
        D.tail_residual_sine(1.0)


def test_sine_gap_small_x_and_monotone():
    assert D.sine_gap_probability(1e-8) == pytest.approx(1 - 2e-8 / math.pi, abs=1e-15)
    assert D.sine_gap_probability(2.0) < D.sine_gap_probability(1.0)


def test_sine_gap_table():
    tab = D.sine_gap_table()
    assert tab.kind == "gap"
    assert tab.grid[0] == pytest.approx(0.1) and tab.grid[-1] == pytest.approx(12.0)
    assert np.all(np.diff(tab.values) < 0)


def test_small_x_series():
    for x in (1e-3, 1e-2):
        assert abs(D.sine_gap_probability(x) - (1 - 2 * x / math.pi)) <= 5 * x * x


def test_small_x_fourth_order_term():
    # second Fredholm term: (1/2) int int K(z,z)K(w,w) - K(z,w)^2 = 4 x^4 / (9 pi^2) + O(x^6)
    x = 0.05
    got = D.sine_gap_probability(x) - (1 - 2 * x / math.pi)
    assert got == pytest.approx(4 * x**4 / (9 * math.pi**2), rel=1e-2)


def test_log_derivative_single_interval():
    assert D.log_derivative_gap(10.0) == pytest.approx(-10.0, abs=0.5)
    assert D.log_derivative_gap(10.0) == pytest.approx(-10.02506, abs=1e-4)


def test_log_derivative_matches_plain_difference():
    a = D.log_derivative_gap(3.0)
    h = 1e-4
    fd = (D.log_sine_gap(3.0 + h) - D.log_sine_gap(3.0 - h)) / (2 * h)
    assert a == pytest.approx(fd, rel=1e-7)


def test_two_interval_oscillation_scan():
    domain = F.IntervalUnion(((-1.0, -0.3), (0.3, 1.0)))
    scan = D.gap_oscillation_scan(np.arange(6.0, 12.01, 0.25), domain)
    assert scan.slope < 0
    assert math.isfinite(scan.max_abs_residual) and scan.max_abs_residual < 0.5
