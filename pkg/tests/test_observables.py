import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinwalk import observables as obs
from spinwalk.density import density_general, second_moment
from spinwalk.model import canonical_spin_state, make_params, params_from_alpha
from spinwalk.quadrature import time_average

# 1 - sqrt(2 pi) e^2 erfc(sqrt 2), 20 digits from mpmath
ETA_BAR_1 = 0.15726154142389105355
# sqrt(2/pi) int e^{-2x^2} x^4/(1+x^2)^2 dx, mpmath
COS4_1 = 0.050415394983618687425


def test_precession_vectors_at_zero():
    pv = obs.precession_vectors(0.7, 0.0, params_from_alpha(1.3))
    assert (pv.e_x, pv.e_y, pv.e_z) == (0.0, 0.0, 1.0)
    assert (pv.T_x, pv.T_y, pv.T_z) == (0.0, 0.0, 0.0)


def test_precession_vectors_without_field():
    pr = make_params(0.0, 1.0, 1.0)
    for p in (-1.0, 0.0, 2.0):
        for t in (0.5, 9.0):
            pv = obs.precession_vectors(p, t, pr)
            assert pv.e_z == pytest.approx(1.0) and pv.T_z == pytest.approx(t)
            assert pv.T_x == 0 and pv.T_y == 0


@given(p=st.floats(-3, 3), t=st.floats(0.1, 30), alpha=st.floats(0.05, 5))
@settings(max_examples=40, deadline=None)
def test_time_integrals_by_finite_difference(p, t, alpha):
    pr = params_from_alpha(alpha)
    h = 1e-5
    a, b, m = (obs.precession_vectors(p, tt, pr) for tt in (t - h, t + h, t))
    for T, e in (("T_x", "e_x"), ("T_y", "e_y"), ("T_z", "e_z")):
        d = (getattr(b, T) - getattr(a, T)) / (2 * h)
        assert abs(d - getattr(m, e)) < 1e-6


def test_eta_basic_values():
    assert obs.eta(0.0, 0.8) == pytest.approx(1.0, abs=1e-12)
    assert obs.eta(123.0, 0.0) == 1.0
    wt = 0.01
    for alpha in (0.3, 1.0, 4.0):
        assert abs(obs.eta(wt, alpha) - (1 - wt * wt / 2)) < 1e-8


def test_eta_time_average_alpha1():
    avg = time_average(lambda wt: obs.eta(wt, 1.0), 200.0, 600.0, 3001, vectorized=True)
    assert abs(avg - ETA_BAR_1) < 2e-2


def test_eta_bar_values():
    assert obs.eta_bar(0.0) == 1.0
    assert abs(obs.eta_bar(0.1) - (1 - math.sqrt(2 * math.pi) * 0.1)) < 5e-2
    assert abs(obs.eta_bar(1.0) - ETA_BAR_1) < 1e-14
    assert abs(obs.eta_bar(1.0) - 0.15730) < 1e-4
    assert obs.eta_bar(10.0) == pytest.approx(1 / 400, rel=0.1)
    assert 0 < obs.eta_bar(1e3) < 1e-6  # no overflow past the switch to erfcx


@pytest.mark.parametrize("alpha", [1e-3, 0.1, 0.5, 1.0, 3.0, 8.0])
def test_eta_bar_closed_form_matches_quadrature(alpha):
    assert abs(obs.eta_bar(alpha) - obs.cos2_average(alpha)) < 1e-12


def test_eta_bar_monotone():
    a = np.linspace(0, 10, 201)
    vals = np.array([obs.eta_bar(x) for x in a])
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("alpha", [0.2, 1.0, 2.5])
def test_eta_bounds(alpha):
    wt = np.linspace(0, 200, 2001)
    e = obs.eta(wt, alpha)
    assert np.all(e <= 1 + 1e-12)
    assert np.all(e >= 2 * obs.eta_bar(alpha) - 1 - 1e-12)


def test_eta_routes_agree():
    wt = np.array([0.5, 10.0, 300.0])
    for alpha in (0.05, 0.7, 3.0):
        assert np.abs(obs.eta(wt, alpha, method="real") - obs.eta(wt, alpha, method="ray")).max() < 1e-10


def test_eta_envelope_and_phase():
    alpha = 0.5
    wt = np.linspace(50, 500, 901)
    dev = obs.eta(wt, alpha) - obs.eta_bar(alpha)
    assert np.all(np.abs(dev) <= 2.5 * 2 * alpha / np.sqrt(wt))
    # zero crossings of eta - eta_bar near omega t = pi/4 + k pi (where cos(wt + pi/4) = 0)
    w = np.linspace(95, 110, 3001)
    d = obs.eta(w, alpha) - obs.eta_bar(alpha)
    crossings = w[:-1][np.sign(d[:-1]) != np.sign(d[1:])]
    predicted = math.pi / 4 + np.pi * np.arange(30, 36)
    predicted = predicted[(predicted > 95) & (predicted < 110)]
    for c in crossings:
        assert np.min(np.abs(predicted - c)) < math.pi / 2
    assert obs.eta_asymptotic(100.0, 0.0) == 1.0


def test_eta_asymptotic_close_to_eta():
    alpha = 0.5
    wt = np.linspace(200, 400, 50)
    assert np.max(np.abs(obs.eta(wt, alpha) - obs.eta_asymptotic(wt, alpha))) < 0.02


def test_mean_x_alpha0():
    pr = make_params(0.0, 2.0, 1.0)
    assert obs.mean_x(3.0, 0.5, pr) == pytest.approx(3.0)


def test_mean_x_bounds(rng):
    for _ in range(100):
        alpha = rng.uniform(0.1, 5)
        wt = rng.uniform(1, 500)
        pr = params_from_alpha(alpha)
        t = wt / pr.omega
        ratio = obs.mean_x(t, 0.5, pr) / (0.5 * t)
        assert obs.eta_bar(alpha) - 1 / wt < ratio < obs.eta_bar(alpha) + 1 / wt


def test_mean_x_asymptotic_regime():
    pr = params_from_alpha(0.5)
    t = 200 / pr.omega
    exact = obs.mean_x(t, 0.5, pr)
    asym = obs.mean_x_asymptotic(t, 0.5, pr)
    correction = 0.5 * t * 2 * 0.5 / 200 ** 1.5
    assert abs(exact - asym) < 0.05 * correction


def test_mean_x_matches_evolved_density(z_plus):
    pr = params_from_alpha(0.8)
    t = 17.0
    m, _ = second_moment(density_general(z_plus, t, pr))
    assert m == pytest.approx(obs.mean_x(t, 0.5, pr), rel=1e-9)


def test_variance_simple_limits():
    pr = params_from_alpha(1.2, sigma=1.7)
    assert obs.variance_x(0.0, 0.5, 0.5, pr) == pytest.approx(1.7 ** 2)
    pr0 = make_params(0.0, 1.0, 1.3)
    assert obs.variance_x(25.0, 0.5, 0.5, pr0) == pytest.approx(1.3 ** 2)


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_variance_matches_evolved_density(alpha, z_plus):
    pr = params_from_alpha(alpha)
    t = 10 * pr.larmor_period
    _, var = second_moment(density_general(z_plus, t, pr))
    assert var == pytest.approx(obs.variance_x(t, 0.5, 0.5, pr), rel=2e-2)


def test_variance_spin_one():
    pr = params_from_alpha(0.9)
    t = 23.0
    st1 = canonical_spin_state("custom", j=1, custom_coeffs=[0, 0, 1])
    _, var = second_moment(density_general(st1, t, pr))
    assert var == pytest.approx(obs.variance_x(t, 1, 1, pr), rel=1e-8)


def test_y_plus_long_time_spread_is_cos2():
    # Delta x^2 / t^2 -> (v^2/4) <cos^2 theta> for y_plus (alpha = 1, omega t = 400)
    pr = params_from_alpha(1.0)
    t = 400.0
    _, var = second_moment(density_general(canonical_spin_state("y_plus"), t, pr))
    assert var / t ** 2 / 0.25 == pytest.approx(obs.cos2_average(1.0), rel=2e-2)
    assert var / t ** 2 / 0.25 != pytest.approx(obs.cos4_average(1.0), rel=0.5)


def test_cos4_oracle_and_spread_velocity():
    assert abs(obs.cos4_average(1.0) - COS4_1) < 1e-13
    assert obs.spread_velocity(0.0) == 0.5
    assert obs.spread_velocity(10.0) / (math.sqrt(3) / 800) == pytest.approx(1.0, rel=0.1)
    # leading small-alpha behaviour is linear: <cos^4> ~ 1 - 3 sqrt(pi/2) alpha
    a = 1e-3
    assert obs.spread_velocity(a) == pytest.approx(0.5 * math.sqrt(1 - 3 * math.sqrt(math.pi / 2) * a), abs=1e-5)


def test_cos4_closed_form_turns_negative():
    assert obs.cos4_average_closed_form(1.0) < 0 < obs.cos4_average(1.0)


def test_spread_velocity_monotone():
    a = np.geomspace(1e-3, 20, 40)
    v = [obs.spread_velocity(x) for x in a]
    assert np.all(np.diff(v) < 0)


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_spread_rates_against_evolution(alpha, y_plus, z_plus):
    pr = params_from_alpha(alpha)
    t = 500 * pr.larmor_period
    _, vy = second_moment(density_general(y_plus, t, pr))
    _, vz = second_moment(density_general(z_plus, t, pr))
    assert math.sqrt(vy) / t == pytest.approx(obs.spread_rate_y_plus(alpha), rel=2e-2)
    assert math.sqrt(vz) / t == pytest.approx(obs.spread_rate_z_plus(alpha), rel=2e-2)


def test_time_series_validation():
    with pytest.raises(Exception):
        obs.TimeSeries(np.array([0.0, 0.0]), np.array([1.0, 1.0]))
    ts = obs.eta_series(np.linspace(0, 5, 6), 1.0)
    assert ts.values[0] == pytest.approx(1.0)
