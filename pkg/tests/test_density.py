import math

import numpy as np
import pytest

from spinwalk.asymptotics import large_alpha_width
from spinwalk.density import (
    DeltaMixture,
    DensityProfile,
    asymmetry,
    central_density,
    default_x_grid,
    density_general,
    density_symmetric,
    l1_distance,
    limit_density_alpha0,
    peak_census,
    shannon_entropy,
)
from spinwalk.errors import DomainError
from spinwalk.model import canonical_spin_state, params_from_alpha


def _gauss(x, s):
    return np.exp(-x * x / (2 * s * s)) / (math.sqrt(2 * math.pi) * s)


def test_t0_is_gaussian():
    pr = params_from_alpha(0.7, sigma=1.3)
    x = np.linspace(-8, 8, 161)
    prof = density_symmetric(x, 0.0, pr)
    assert np.abs(prof.values - _gauss(x, 1.3)).max() < 1e-10


def test_symmetric_profile_is_even():
    pr = params_from_alpha(0.4)
    t = 3 * pr.larmor_period
    x = default_x_grid(t, pr, points_per_sigma=4)
    prof = density_symmetric(x, t, pr)
    assert asymmetry(prof) < 1e-10
    assert abs(prof.norm() - 1) < 1e-6


@pytest.mark.parametrize("alpha", [0.2, 1.0, 3.0])
def test_quadrature_and_fft_agree(alpha, y_plus):
    pr = params_from_alpha(alpha)
    t = 5 * pr.larmor_period
    fft = density_general(y_plus, t, pr)
    keep = np.abs(fft.x_grid) < 0.5 * t + 15
    quad = density_symmetric(fft.x_grid[keep], t, pr)
    assert l1_distance(quad, fft) < 1e-6


def test_spin_one_three_packets():
    pr = params_from_alpha(0.005)
    t = 0.01 * pr.larmor_period
    st = canonical_spin_state("custom", j=1, custom_coeffs=np.ones(3) / math.sqrt(3))
    prof = density_general(st, t, pr)
    for m in (-1, 0, 1):
        sel = np.abs(prof.x_grid - m * t) < 0.5 * t
        assert np.sum(prof.values[sel]) * prof.dx == pytest.approx(1 / 3, abs=2e-2)


def test_z_plus_small_alpha_bimodal(z_plus):
    pr = params_from_alpha(0.05)
    t = 10 * pr.larmor_period
    prof = density_general(z_plus, t, pr)
    pc = peak_census(prof)
    assert pc.count >= 2
    tallest = pc.positions[np.argmax(pc.heights)]
    assert abs(tallest - t / 2) < 0.1 * t


def test_limit_density_alpha0(y_plus, z_plus):
    lim = limit_density_alpha0(y_plus)
    assert sorted(lim.velocities) == [-0.5, 0.5]
    assert lim.weights == pytest.approx((0.5, 0.5))
    lim = limit_density_alpha0(z_plus, v=2.0)
    assert lim.velocities == (1.0,) and lim.weights == (1.0,)
    assert lim.positions(3.0) == pytest.approx([3.0])
    with pytest.raises(DomainError):
        DeltaMixture((0.0,), (0.5,))


def test_entropy_of_gaussian():
    x = np.linspace(-20, 20, 4001)
    s = 1.7
    prof = DensityProfile(x, _gauss(x, s), 0.0, 0.0, s)
    assert shannon_entropy(prof) == pytest.approx(0.5 * math.log(2 * math.pi * math.e * s * s), abs=1e-8)


def test_entropy_grows(y_plus):
    pr = params_from_alpha(1.0)
    vals = [shannon_entropy(density_general(y_plus, k * pr.larmor_period, pr)) for k in (1, 2, 4, 8)]
    assert np.all(np.diff(vals) > 0)


def test_central_density():
    pr = params_from_alpha(0.5)
    assert central_density(0.0, pr) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-10)
    pr = params_from_alpha(5.0)
    t = 20 * pr.larmor_period
    expect = 1 / (math.sqrt(2 * math.pi) * large_alpha_width(t, pr))
    assert central_density(t, pr) == pytest.approx(expect, rel=0.1)


def test_peak_census_sides():
    x = np.linspace(-10, 10, 2001)
    P = _gauss(x - 4, 0.5) + 0.5 * _gauss(x + 4, 0.5) + 0.001 * _gauss(x, 0.5)
    prof = DensityProfile(x, P, 0.0, 0.0)
    pc = peak_census(prof)
    assert pc.count == 2
    assert peak_census(prof, side="positive").positions == pytest.approx([4.0], abs=0.02)
    assert peak_census(prof, side="negative").count == 1
    assert peak_census(prof, prominence_threshold=1e-4).count == 3
    with pytest.raises(DomainError):
        peak_census(prof, side="left")


def test_mass_concentrates_as_alpha_vanishes(y_plus):
    masses = []
    for alpha in (0.2, 0.05, 0.01):
        pr = params_from_alpha(alpha)
        t = 2 * pr.larmor_period
        prof = density_general(y_plus, t, pr)
        near = np.abs(np.abs(prof.x_grid) - t / 2) < 0.05 * t
        masses.append(np.sum(prof.values[near]) * prof.dx)
    assert masses[0] < masses[1] < masses[2]
    assert masses[2] > 0.9
