import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinwalk.errors import DomainError
from spinwalk.specfun import (
    bessel_j0,
    bessel_j1,
    bessel_k1,
    bessel_wronskian,
    bessel_y0,
    bessel_y1,
    erfc_scaled,
    hankel2_1,
    probability_integral,
)

# erf(sqrt 2) from mpmath at 30 digits
PHI_SQRT2 = 0.954499736103641585599434725666
# first positive zero of Y1 (mpmath.besselyzero(1, 1))
Y1_ZERO = 2.19714132603101703515


def test_phi_values():
    assert probability_integral(0.0) == 0.0
    assert abs(probability_integral(math.sqrt(2)) - PHI_SQRT2) < 1e-15
    assert probability_integral(40.0) == 1.0


@given(st.floats(-30, 30))
def test_phi_odd_and_accurate(z):
    assert probability_integral(-z) == -probability_integral(z)
    assert abs(probability_integral(z) - math.erf(z)) <= 1e-14


def test_phi_matches_long_series():
    z = np.linspace(0, 2, 41)
    ref = []
    for zz in z:
        # 2000-term Maclaurin series, summed with mpmath
        s = mp.nsum(lambda n: (-1) ** n * mp.mpf(zz) ** (2 * n + 1) / (mp.factorial(n) * (2 * n + 1)), [0, 2000])
        ref.append(float(2 / mp.sqrt(mp.pi) * s))
    assert np.max(np.abs(probability_integral(z) - np.array(ref))) < 1e-13


def test_erfc_scaled_against_mpmath():
    for z in (0.0, 0.5, 1.9, 2.1, 5.0, 30.0, 1e4):
        ref = float(mp.exp(mp.mpf(z) ** 2) * mp.erfc(z))
        assert erfc_scaled(z) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(DomainError):
        erfc_scaled(-1.0)


def test_bessel_against_mpmath():
    xs = np.concatenate([np.geomspace(1e-3, 1, 20), np.linspace(1, 30, 59), np.linspace(30, 500, 48)])
    for x in xs:
        env = math.sqrt(2 / (math.pi * x)) if x > 1 else 1.0
        assert abs(bessel_j1(x) - float(mp.besselj(1, x))) <= 1e-10 * env
        assert abs(bessel_y1(x) - float(mp.bessely(1, x))) <= 1e-10 * max(env, abs(float(mp.bessely(1, x))))
        assert abs(bessel_j0(x) - float(mp.besselj(0, x))) <= 1e-10 * env
        assert abs(bessel_y0(x) - float(mp.bessely(0, x))) <= 1e-10 * max(env, abs(float(mp.bessely(0, x))))


def test_bessel_k1_against_mpmath():
    for x in (1e-3, 0.1, 1.0, 4.2, 17.0, 100.0, 600.0):
        assert bessel_k1(x) == pytest.approx(float(mp.besselk(1, x)), rel=1e-12)
    assert bessel_k1(800.0) == 0.0


def test_bessel_elementary_values():
    assert bessel_j1(0.0) == 0.0
    with pytest.raises(DomainError):
        bessel_y1(0.0)
    with pytest.raises(DomainError):
        hankel2_1(-1.0)
    assert bessel_y1(1e-6) < -1e5


def test_first_zero_of_y1_by_bisection():
    lo, hi = 2.0, 2.5
    assert bessel_y1(lo) < 0 < bessel_y1(hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bessel_y1(mid) < 0:
            lo = mid
        else:
            hi = mid
    assert abs(lo - Y1_ZERO) < 1e-9


def test_modulus_asymptotics():
    # J1^2 + Y1^2 = 2/(pi x) (1 + 3/(8 x^2) + ...); the one-term law is off by 3.75e-5 at x = 100
    x = 100.0
    mod2 = (bessel_j1(x) ** 2 + bessel_y1(x) ** 2) * math.pi * x / 2
    assert mod2 == pytest.approx(1 + 3 / (8 * x * x), rel=1e-8)
    assert abs(mod2 - 1) < 4e-5
    assert abs(hankel2_1(50.0)) == pytest.approx(math.sqrt(2 / (math.pi * 50)), rel=1e-2)
    h = hankel2_1(np.array([50.0]))[0]
    assert abs(h) / math.sqrt(2 / (math.pi * 50)) - 1 < 1e-2


@given(st.floats(1e-3, 400))
def test_hankel_parts(x):
    h = hankel2_1(x)
    assert h.real == bessel_j1(x)
    assert h.imag == -bessel_y1(x)


def test_hankel_imag_diverges_positive():
    assert hankel2_1(1e-5).imag > 1e4


def test_wronskian():
    x = np.linspace(0.1, 100, 4000)
    assert np.max(np.abs(bessel_wronskian(x) * math.pi * x / 2 - 1)) <= 1e-8


def test_scalar_in_scalar_out():
    assert isinstance(bessel_j1(1.0), float)
    assert isinstance(hankel2_1(1.0), complex)
    assert bessel_j1(np.array([1.0, 2.0])).shape == (2,)
