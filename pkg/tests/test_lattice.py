import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinwalk import lattice as qw
from spinwalk.errors import DomainError
from spinwalk.model import params_from_alpha


def test_single_step():
    sites, P = qw.position_distribution(qw.walk(1, "plus"))
    # (1, 0) hops right, then the coin splits it evenly
    assert P[sites == 1][0] == pytest.approx(1.0)
    a = qw.walk(1, "plus").amplitudes[sites == 1][0]
    assert a == pytest.approx(np.array([1, 1]) / math.sqrt(2))


@given(n=st.integers(1, 120))
@settings(max_examples=25, deadline=None)
def test_support_and_parity(n):
    sites, P = qw.position_distribution(qw.walk(n))
    assert np.all(P[np.abs(sites) > n] == 0)
    assert np.all(P[(sites + n) % 2 == 1] == 0)
    assert abs(P.sum() - 1) < 1e-12


def test_norm_after_many_steps():
    state = qw.walk(10_000)
    assert abs(state.norm() - 1) < 1e-10


@pytest.mark.parametrize("coin,symmetric", [("y_plus", True), ("y_minus", True), ("plus", False), ("minus", False)])
def test_symmetry_only_for_y_coins(coin, symmetric):
    sites, P = qw.position_distribution(qw.walk(100, coin))
    assert (np.abs(P - P[::-1]).max() < 1e-12) == symmetric
    mean = float(np.sum(sites * P))
    assert (abs(mean) < 1e-12) == symmetric


def test_front_near_hadamard_speed():
    sites, P = qw.position_distribution(qw.walk(100))
    assert 60 <= qw.lattice_front(sites, P) <= 75


def test_standard_deviation_converges():
    ratios = []
    for n in (1000, 2000):
        sites, P = qw.position_distribution(qw.walk(n))
        ratios.append(math.sqrt(np.sum(sites ** 2 * P)) / n)
    # sqrt(1 - 1/sqrt 2) = 0.5411961
    assert ratios[1] == pytest.approx(math.sqrt(1 - 1 / math.sqrt(2)), abs=1e-4)
    assert abs(ratios[1] - 0.5411961) < abs(ratios[0] - 0.5411961) + 1e-7


def test_kolmogorov_distance():
    cdf = np.cumsum(qw.position_distribution(qw.walk(50))[1])
    assert qw.kolmogorov_distance(cdf, cdf) == 0.0
    assert qw.kolmogorov_distance([0, 0.5, 1], [0, 0.2, 1]) == pytest.approx(0.3)


def test_bad_inputs():
    with pytest.raises(DomainError):
        qw.walk(-1)
    with pytest.raises(DomainError):
        qw.initial_state((1.0, 1.0))


def test_continuum_comparison():
    pr = params_from_alpha(0.02)
    out = qw.continuum_comparison(100, pr)
    assert out["reference_speeds"]["hadamard"] == pytest.approx(1 / math.sqrt(2))
    assert 0 <= out["kolmogorov_distance"] <= 1
    assert out["lattice_front_speed"] == pytest.approx(0.7, abs=0.06)
    assert out["continuum_front_speed"] == pytest.approx(0.5, abs=0.03)
    # the continuum side depends only on the physical time
    same_t = qw.continuum_comparison(50, pr, t=out["t"])
    assert same_t["continuum_front"] == out["continuum_front"]
