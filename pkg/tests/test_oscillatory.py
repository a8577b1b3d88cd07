"""Correction-function and remainder-gauge checks against brute force."""

import math

import numpy as np
import pytest
from slspec import (PotentialSpec, SingularArgumentError, SpectralDomain,
                    correction_terms, correction_total, remainder_gauge)
from conftest import RAW_PIECES, piecewise_quad

PI = math.pi


def brute_force_terms(raw, x, lam):
    """The four correction terms by adaptive quadrature (double term nested)."""
    s = np.sqrt(complex(lam))
    t1 = piecewise_quad(raw, lambda u, t: u * np.sin(2 * s * t), 0.0, x)
    t2 = piecewise_quad(raw, lambda u, t: u * u, 0.0, x) / (2 * s)

    def inner(t):
        return piecewise_quad(raw, lambda u, w: u * np.sin(2 * s * w), 0.0, t,
                              epsabs=1e-11, epsrel=1e-11, limit=200)

    t3 = 2 * piecewise_quad(raw, lambda u, t: u * np.cos(2 * s * t) * inner(t),
                            0.0, x, epsabs=1e-10, epsrel=1e-10, limit=120)
    t4 = -piecewise_quad(raw, lambda u, t: u * u * np.cos(2 * s * t), 0.0, x) \
        / (2 * s)
    return t1, t2, t3, t4


def test_zero_potential_all_terms_vanish(free_pot):
    t = correction_terms(free_pot, 1.7, 25.0)
    assert t.term_single_sin == 0 and t.term_l2 == 0
    assert t.term_double == 0 and t.term_u2_cos == 0
    assert t.total == 0


def test_constant_potential_closed_forms():
    a = 1.0
    for n in (2, 7, 21):
        m = n - 0.5
        t = correction_terms(PotentialSpec.constant(a), PI, m * m)
        assert abs(t.term_single_sin - a / m) < 1e-12
        assert abs(t.term_l2 - a * a * PI / (2 * m)) < 1e-12
        assert abs(t.term_double + a * a * PI / (2 * m)) < 1e-12
        assert abs(t.term_u2_cos) < 1e-12
        assert abs(t.total - a / m) < 1e-12


def test_step_potential_closed_form(step_pot):
    a = 2.0
    for n in (4, 11):
        m = n - 0.5
        total = correction_terms(step_pot, PI, m * m).total
        expect = a / (2 * m) + a * a * np.sin(m * PI) / (4 * m * m)
        assert abs(total - expect) < 1e-12


@pytest.mark.parametrize("name,lam,x", [
    ("trig", 2.1, PI), ("trig", 147.0, 2.2), ("poly", 31.0, PI),
    ("step", 88.5, 2.9), ("const", 401.0, 1.1), ("poly", 907.0, PI),
])
def test_terms_match_brute_force(all_pots, name, lam, x):
    got = correction_terms(all_pots[name], x, lam)
    t1, t2, t3, t4 = brute_force_terms(RAW_PIECES[name], x, lam)
    assert abs(got.term_single_sin - t1) < 1e-9
    assert abs(got.term_l2 - t2) < 1e-9
    assert abs(got.term_double - t3) < 1e-8
    assert abs(got.term_u2_cos - t4) < 1e-9
    assert abs(got.total - (t1 + t2 + t3 + t4)) < 1e-8


def test_terms_match_brute_force_complex_lambda(all_pots):
    lam = complex(110.0, 9.0)
    got = correction_terms(all_pots["trig"], 2.4, lam)
    t1, t2, t3, t4 = brute_force_terms(RAW_PIECES["trig"], 2.4, lam)
    assert abs(got.total - (t1 + t2 + t3 + t4)) < 1e-8


def test_gauge_finite_at_complex_lambda(trig_pot):
    lam = complex(90.0, 4.0)
    g = remainder_gauge(trig_pot, lam)
    assert np.isfinite(g.value) and g.value > 0
    assert g.tail == pytest.approx(trig_pot.l2_norm_sq / abs(lam) ** 0.5)


def test_total_equals_sum_of_terms(step_pot):
    t = correction_terms(step_pot, 1.2, 55.0)
    assert t.total == (t.term_single_sin + t.term_l2
                       + t.term_double + t.term_u2_cos)


def test_continuity_in_x_near_breakpoints(step_pot, poly_pot):
    for pot in (step_pot, poly_pot):
        for b in pot.breaks[1:-1]:
            for h in (1e-6, -1e-6):
                d = abs(correction_total(pot, b + h, 70.0)
                        - correction_total(pot, b, 70.0))
                assert d < 1e-4


def test_lambda_zero_rejected(step_pot):
    with pytest.raises(SingularArgumentError):
        correction_terms(step_pot, 1.0, 0.0)
    with pytest.raises(SingularArgumentError):
        remainder_gauge(step_pot, 0.0)


def test_gauge_zero_potential(free_pot):
    g = remainder_gauge(free_pot, 25.0)
    assert g.value == 0.0 and g.tail == 0.0


def test_gauge_value_dominates_tail(all_pots):
    for name, pot in all_pots.items():
        g = remainder_gauge(pot, 9.5 ** 2)
        assert g.value >= g.tail >= 0.0
        assert g.upper_estimate >= g.value


def test_gauge_against_dense_brute_force(const_pot):
    # u = 1 at n = 10: closed-form profiles on a 10x denser grid
    m = 9.5
    lam = m * m
    g = remainder_gauge(const_pot, lam, sup_grid=256)
    xs = np.linspace(0.0, PI, 2561)
    f_sin = (1 - np.cos(2 * m * xs)) / (2 * m)
    f_cos = np.sin(2 * m * xs) / (2 * m)
    # double term: int_0^x cos(2mt) (1 - cos(2mt)) / (2m) dt
    f_dbl = (np.sin(2 * m * xs) / (2 * m) - xs / 2
             - np.sin(4 * m * xs) / (8 * m)) / (2 * m)
    f_sqc = np.sin(2 * m * xs) / (2 * m) / m
    bracket = (np.abs(f_sin) + np.abs(f_cos) + 2 * np.abs(f_dbl)
               + 0.5 * np.abs(f_sqc))
    ref = bracket.max() + PI / m
    assert g.value == pytest.approx(ref, rel=2e-3)
    assert m * g.value == pytest.approx(m * ref, rel=2e-3)
    assert 3.0 < m * g.value < 9.0          # O(1/m) scale


def test_gauge_stable_under_grid_doubling(all_pots):
    for name, pot in all_pots.items():
        lam = 14.5 ** 2
        g1 = remainder_gauge(pot, lam, sup_grid=256).value
        g2 = remainder_gauge(pot, lam, sup_grid=512).value
        assert abs(g2 - g1) <= 2e-3 * max(g1, 1e-12), name


def test_gauge_decays_along_spectrum(step_pot):
    vals = [remainder_gauge(step_pot, (n - 0.5) ** 2).value
            for n in (25, 50, 100, 200)]
    assert vals[0] > vals[1] > vals[2] > vals[3]


def test_gauge_squares_summable(all_pots):
    # Cauchy increments of the partial sums of gamma^2 at lam = m^2
    for name, pot in all_pots.items():
        if name == "free":
            continue
        gs = np.array([remainder_gauge(pot, (n - 0.5) ** 2, sup_grid=128).value
                       for n in range(1, 201)])
        sums = np.cumsum(gs ** 2)
        assert sums[199] - sums[99] <= 0.01 * sums[99], name


def test_spectral_domain_validation():
    assert SpectralDomain().alpha == 2.0
    with pytest.raises(ValueError):
        SpectralDomain(alpha=0.0)
