"""Discrete-time coined walk on the integer line.

One step is S (coin "+" hops right, "-" hops left) followed by the coin
T = (1/sqrt 2) [[1, -1], [1, 1]] acting on (a_+, a_-).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DensityProfile, density_general, peak_census
from .errors import DomainError
from .model import PhysicalParams, SpinState, canonical_spin_state

COIN = np.array([[1.0, -1.0], [1.0, 1.0]]) / math.sqrt(2.0)

COIN_STATES = {
    "plus": (1.0, 0.0),
    "minus": (0.0, 1.0),
    "y_plus": (1 / math.sqrt(2), 1j / math.sqrt(2)),
    "y_minus": (1 / math.sqrt(2), -1j / math.sqrt(2)),
}


@dataclass(frozen=True)
class LatticeState:
    """Amplitudes over sites -N..N (rows) and coin (+, -) (columns)."""

    amplitudes: np.ndarray
    step_count: int = 0

    @property
    def half_width(self) -> int:
        return (self.amplitudes.shape[0] - 1) // 2

    @property
    def sites(self) -> np.ndarray:
        n = self.half_width
        return np.arange(-n, n + 1)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def initial_state(coin="y_plus", capacity: int = 16) -> LatticeState:
    """Walker at n = 0 with the given coin, by name or as (a_+, a_-)."""
    c = COIN_STATES[coin] if isinstance(coin, str) else coin
    c = np.asarray(c, dtype=complex)
    if c.shape != (2,) or abs(np.sum(np.abs(c) ** 2) - 1) > 1e-9:
        raise DomainError("initial_state: coin must be a normalised pair (a_+, a_-)")
    amps = np.zeros((2 * capacity + 1, 2), dtype=complex)
    amps[capacity] = c / math.sqrt(np.sum(np.abs(c) ** 2))
    return LatticeState(amps, 0)


def _grow(state: LatticeState, need: int) -> LatticeState:
    n = state.half_width
    if need <= n:
        return state
    new_n = max(need, 2 * n)
    amps = np.zeros((2 * new_n + 1, 2), dtype=complex)
    amps[new_n - n:new_n + n + 1] = state.amplitudes
    return LatticeState(amps, state.step_count)


def step(state: LatticeState, count: int = 1) -> LatticeState:
    """Apply TS ``count`` times; the array grows so the support never wraps."""
    state = _grow(state, state.step_count + count + 1)
    a = state.amplitudes.copy()
    for _ in range(count):
        plus = np.roll(a[:, 0], 1)
        minus = np.roll(a[:, 1], -1)
        a[:, 0] = COIN[0, 0] * plus + COIN[0, 1] * minus
        a[:, 1] = COIN[1, 0] * plus + COIN[1, 1] * minus
    return LatticeState(a, state.step_count + count)


def walk(steps: int, coin="y_plus") -> LatticeState:
    if steps < 0:
        raise DomainError("walk: steps must be non-negative")
    return step(initial_state(coin, capacity=steps + 1), steps) if steps else initial_state(coin)


def position_distribution(state: LatticeState):
    """(sites, P(n)) with P(n) = |a_{n,+}|^2 + |a_{n,-}|^2."""
    return state.sites, np.sum(np.abs(state.amplitudes) ** 2, axis=1)


def kolmogorov_distance(cdf_a, cdf_b) -> float:
    """sup |F_a - F_b| over common evaluation points."""
    return float(np.max(np.abs(np.asarray(cdf_a) - np.asarray(cdf_b))))


def lattice_front(sites, probs) -> float:
    """Largest |n| among prominent maxima (2% of max) of the distribution.

    Only even or odd sites are populated at a given step, so the census runs
    on the populated sublattice.
    """
    parity = int(np.argmax(probs)) % 2
    sel = (np.arange(sites.size) % 2) == parity
    prof = DensityProfile(sites[sel].astype(float), probs[sel], 0.0, 0.0)
    return float(np.max(np.abs(peak_census(prof).positions)))


def continuum_comparison(steps: int, params: PhysicalParams, state: SpinState | None = None,
                         t: float | None = None) -> dict:
    """Compare the lattice walk with the continuum density at the same physical time.

    Lattice site n maps to x = n a with a = v dt and dt = t / steps; by default
    t = steps sigma / v.  Returns both fronts and speeds, the Kolmogorov
    distance between the two CDFs, and the ratio of the front speeds.  The
    fronts are not expected to coincide (Hadamard front ~ t/sqrt 2, continuum
    alpha -> 0 front ~ v t / 2).
    """
    if steps < 1:
        raise DomainError("continuum_comparison: steps must be >= 1")
    if state is None:
        state = canonical_spin_state("y_plus")
    if state.two_j != 1:
        raise DomainError("continuum_comparison: the lattice coin is spin 1/2")
    if t is None:
        t = steps * params.sigma / params.v
    dt = t / steps
    a = params.v * dt
    # coin order on the lattice is (+, -); SpinState stores (-, +)
    cm, cp = state.coeffs
    sites, probs = position_distribution(walk(steps, (cp, cm)))
    x_lat = sites * a

    prof = density_general(state, t, params)
    cdf_cont = np.cumsum(prof.values) * prof.dx
    # compare CDFs just right of each lattice point
    eval_x = x_lat + 0.5 * a
    cont_at = np.interp(eval_x, prof.x_grid + 0.5 * prof.dx, cdf_cont, left=0.0, right=1.0)
    lat_cdf = np.cumsum(probs)
    dist = kolmogorov_distance(lat_cdf, cont_at)

    lat_front = lattice_front(sites, probs) * a
    cont_peaks = peak_census(prof)
    cont_front = float(np.max(np.abs(cont_peaks.positions))) if cont_peaks.count else 0.0
    return {
        "steps": int(steps),
        "t": float(t),
        "dt": float(dt),
        "lattice_spacing": float(a),
        "alpha": params.alpha,
        "kolmogorov_distance": dist,
        "lattice_front": lat_front,
        "continuum_front": cont_front,
        "lattice_front_speed": lat_front / t,
        "continuum_front_speed": cont_front / t,
        "front_speed_ratio": (lat_front / cont_front) if cont_front else math.nan,
        "reference_speeds": {"hadamard": params.v / math.sqrt(2.0), "continuum_alpha0": 0.5 * params.v},
    }
