"""Probability densities P(x, t) and derived quantities.

Two independent routes:

* ``density_symmetric`` integrates three real integrals directly for the
  y_plus spin-1/2 preparation (no FFT involved);
* ``density_general`` evolves any spin state on a momentum grid and
  transforms back with an FFT.

For y_plus the amplitudes split into an even cosine part A, an odd part B and
an even part D with A, D real and B imaginary, so |psi_+|^2 + |psi_-|^2
collapses to a sum of three squares:

    P = (sqrt(2 pi) sigma)^-1 (I_1^2 + I_2^2 + I_3^2)
    I_1 = pi^-1/2 int e^{-xi^2} (alpha/s) sin(s c/2) cos(xi X) d xi
    I_2 = pi^-1/2 int e^{-xi^2} (xi/s) sin(s c/2) sin(xi X) d xi
    I_3 = pi^-1/2 int e^{-xi^2} cos(s c/2) cos(xi X) d xi

with X = x / sigma, c = v t / sigma, s = sqrt(alpha^2 + xi^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .errors import DomainError, NumericalFailure
from .model import PhysicalParams, SpinState
from .parallel import ordered_map
from .propagator import GridConfig, evolve, to_position
from .quadrature import gaussian_spec, integrate_gaussian_oscillatory

NEGATIVE_CLIP = 1e-12
PEAK_THRESHOLD = 0.02
_NODE_BUDGET = 1 << 22  # nodes x points evaluated per quadrature call


@dataclass(frozen=True)
class DensityProfile:
    x_grid: np.ndarray
    values: np.ndarray
    t: float
    alpha: float
    sigma: float = 1.0
    method: str = ""
    norm_residual: float = 0.0
    clipped: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])

    @property
    def x_over_sigma(self) -> np.ndarray:
        return self.x_grid / self.sigma

    def norm(self) -> float:
        return float(np.trapezoid(self.values, self.x_grid))


def make_profile(x, values, t, params: PhysicalParams, method: str, **meta) -> DensityProfile:
    x = np.asarray(x, dtype=float)
    vals = np.asarray(values, dtype=float)
    if vals.min(initial=0.0) < -NEGATIVE_CLIP:
        raise NumericalFailure(f"{method}: density has negative values down to {vals.min():.3g}")
    clipped = bool(np.any(vals < 0))
    vals = np.where(vals < 0, 0.0, vals)
    resid = abs(float(np.trapezoid(vals, x)) - 1.0) if x.size > 1 else math.nan
    return DensityProfile(x, vals, float(t), params.alpha, params.sigma, method, resid, clipped, dict(meta))


def default_x_grid(t: float, params: PhysicalParams, points_per_sigma: int = 8,
                   margin_sigma: float = 10.0) -> np.ndarray:
    """Symmetric grid over +-(v t / 2 + 10 sigma) with >= 8 points per sigma."""
    half = 0.5 * params.v * abs(t) + margin_sigma * params.sigma
    n_half = math.ceil(half / params.sigma * points_per_sigma)
    return np.linspace(-half, half, 2 * n_half + 1)


def _i_integrals(X: np.ndarray, c: float, alpha: float, tol: float) -> np.ndarray:
    """(I_1, I_2, I_3) for a chunk of positions; shape (len(X), 3)."""
    rate = 0.5 * c + float(np.max(np.abs(X)))

    def g(xi):
        s = np.sqrt(alpha * alpha + xi * xi)
        half = 0.5 * c * s
        sn, cs = np.sin(half), np.cos(half)
        ph = xi[:, None] * X[None, :]
        cx, sx = np.cos(ph), np.sin(ph)
        if alpha > 0:
            a1 = (alpha / s * sn)[:, None] * cx
            a2 = (xi / s * sn)[:, None] * sx
        else:
            # s = |xi|: alpha/s -> 0 and xi/s -> sign(xi) off the origin
            a1 = np.zeros_like(cx)
            a2 = (np.sign(xi) * sn)[:, None] * sx
        a3 = cs[:, None] * cx
        return np.concatenate([a1, a2, a3], axis=1)

    spec = gaussian_spec(1.0, rate, target_abs_err=tol)
    res = integrate_gaussian_oscillatory(g, spec)
    if not res.converged:
        worst = X[np.argmax(np.abs(X))]
        raise NumericalFailure(
            f"density_symmetric: quadrature did not converge near X={worst:.4g} "
            f"(est. error {res.est_error:.3g})")
    n = X.size
    return np.stack([res.value[:n], res.value[n:2 * n], res.value[2 * n:]], axis=1) / math.sqrt(math.pi)


def density_symmetric(x_grid, t: float, params: PhysicalParams, tol: float = 1e-8) -> DensityProfile:
    """P(x, t) for the y_plus spin-1/2 state from the three integrals I_1..I_3."""
    if t < 0:
        raise DomainError("density_symmetric: t must be non-negative")
    x = np.asarray(x_grid, dtype=float)
    X = x / params.sigma
    c = params.v * t / params.sigma
    alpha = params.alpha
    # sort by |X| so each chunk's node count is set by similar positions
    absx = np.abs(X)
    order = np.argsort(absx, kind="stable")
    nodes = gaussian_spec(1.0, 0.5 * c + float(absx.max(initial=0.0))).initial_nodes
    chunk = max(8, _NODE_BUDGET // (3 * nodes))
    pieces = [order[i:i + chunk] for i in range(0, order.size, chunk)]
    results = ordered_map(lambda idx: _i_integrals(X[idx], c, alpha, tol), pieces)
    integrals = np.empty((X.size, 3))
    for idx, vals in zip(pieces, results):
        integrals[idx] = vals
    P = np.sum(integrals ** 2, axis=1) / (math.sqrt(2 * math.pi) * params.sigma)
    return make_profile(x, P, t, params, "quadrature")


def density_general(state: SpinState, t: float, params: PhysicalParams,
                    grid: GridConfig | None = None) -> DensityProfile:
    """P(x, t) = sum_M |psi_M(x, t)|^2 via momentum-space evolution and FFT."""
    amps = to_position(evolve(state, t, params, grid))
    P = amps.density()
    prof = make_profile(amps.x_grid, P, t, params, "fft", n=int(amps.x_grid.size))
    # on the periodic grid the rectangle rule is the exact Parseval sum
    resid = abs(float(np.sum(P) * amps.dx) - 1.0)
    return DensityProfile(prof.x_grid, prof.values, prof.t, prof.alpha, prof.sigma, prof.method,
                          resid, prof.clipped, prof.meta)


@dataclass(frozen=True)
class DeltaMixture:
    velocities: tuple
    weights: tuple

    def __post_init__(self):
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise DomainError("DeltaMixture: weights must sum to 1")

    def positions(self, t: float) -> np.ndarray:
        return np.asarray(self.velocities) * t


def limit_density_alpha0(state: SpinState, v: float = 1.0) -> DeltaMixture:
    """alpha -> 0 limit: sum_M |c_M|^2 delta(x - M v t); packets with zero weight are dropped."""
    w = state.weights()
    keep = w > 0
    w = w[keep] / w[keep].sum()
    return DeltaMixture(tuple(float(m * v) for m in state.m_values[keep]), tuple(float(a) for a in w))


def shannon_entropy(profile: DensityProfile) -> float:
    """-int P ln P dx by the trapezoid rule on the profile grid; P < 1e-300 contributes 0."""
    P = profile.values
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(P > 1e-300, -P * np.log(np.where(P > 1e-300, P, 1.0)), 0.0)
    return float(np.trapezoid(integrand, profile.x_grid))


def central_density(t: float, params: PhysicalParams, tol: float = 1e-10) -> float:
    """P(0, t) for the y_plus state."""
    return float(density_symmetric(np.array([0.0]), t, params, tol).values[0])


@dataclass(frozen=True)
class PeakCensus:
    count: int
    positions: np.ndarray
    heights: np.ndarray


def peak_census(profile: DensityProfile, prominence_threshold: float = PEAK_THRESHOLD,
                side: str = "all") -> PeakCensus:
    """Local maxima with prominence >= threshold * max(P); ``side`` in {all, positive, negative}."""
    P = profile.values
    idx, _ = find_peaks(P, prominence=prominence_threshold * float(P.max()))
    x = profile.x_grid[idx]
    if side == "positive":
        keep = x > 0
    elif side == "negative":
        keep = x < 0
    elif side == "all":
        keep = np.ones(x.shape, bool)
    else:
        raise DomainError(f"peak_census: unknown side {side!r}")
    return PeakCensus(int(keep.sum()), x[keep], P[idx][keep])


def l1_distance(a: DensityProfile, b: DensityProfile) -> float:
    """int |P_a - P_b| dx on a common grid (b is interpolated onto a's grid if needed)."""
    if a.x_grid.shape == b.x_grid.shape and np.allclose(a.x_grid, b.x_grid, rtol=0, atol=1e-12):
        other = b.values
    else:
        other = np.interp(a.x_grid, b.x_grid, b.values, left=0.0, right=0.0)
    return float(np.trapezoid(np.abs(a.values - other), a.x_grid))


def second_moment(profile: DensityProfile):
    """(mean, variance) of x under P."""
    x, P = profile.x_grid, profile.values
    norm = np.trapezoid(P, x)
    m = np.trapezoid(P * x, x) / norm
    return float(m), float(np.trapezoid(P * (x - m) ** 2, x) / norm)


def asymmetry(profile: DensityProfile) -> float:
    """max |P(x) - P(-x)| on a grid that is symmetric about the origin (checked)."""
    x = profile.x_grid
    if not np.allclose(x, -x[::-1], rtol=0, atol=1e-9 * max(1.0, abs(x[-1]))):
        # FFT grids start at -L and stop at L - dx; drop the unmatched first point
        x2 = x[1:]
        if not np.allclose(x2, -x2[::-1], rtol=0, atol=1e-9 * max(1.0, abs(x2[-1]))):
            raise DomainError("asymmetry: grid is not symmetric about x = 0")
        P = profile.values[1:]
    else:
        P = profile.values
    return float(np.max(np.abs(P - P[::-1])))
