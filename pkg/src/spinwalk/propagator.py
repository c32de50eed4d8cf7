"""Exact evolution in the momentum representation and the return trip to x.

At fixed momentum p the Hamiltonian omega J_y + v p J_z is a constant
(2j+1)-dimensional matrix, so the evolution operator is known in closed form
for spin 1/2 and by a small eigen-decomposition for any j.  Position
amplitudes come from one FFT per spin component.

Component order everywhere is M = -j ... +j (for spin 1/2: index 0 is "-").
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, DriftOutOfBoxError, GridResolutionError
from .model import PhysicalParams, SpinState, gaussian_packet_momentum, mixing, spin_matrices

DEFAULT_N = 4096
DEFAULT_PMAX_SIGMA = 16.0
EDGE_FRACTION = 0.05
EDGE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class GridConfig:
    """Uniform momentum grid p_k = -p_max + k dp, k = 0..n-1.

    The conjugate position grid has dx = 2 pi / (n dp) = pi / p_max and spans
    [-n dx / 2, n dx / 2).
    """

    n: int
    p_max: float

    @property
    def dp(self) -> float:
        return 2.0 * self.p_max / self.n

    @property
    def dx(self) -> float:
        return math.pi / self.p_max

    @property
    def x_half_width(self) -> float:
        return 0.5 * self.n * self.dx

    def p_grid(self) -> np.ndarray:
        return -self.p_max + self.dp * np.arange(self.n)

    def x_grid(self) -> np.ndarray:
        return -self.x_half_width + self.dx * np.arange(self.n)

    def check(self, sigma: float) -> None:
        if self.dp > 1.0 / (8.0 * sigma) * (1 + 1e-12):
            raise GridResolutionError(
                f"grid: dp={self.dp:.4g} exceeds 1/(8 sigma)={1 / (8 * sigma):.4g}; raise n")
        if self.p_max < 8.0 / sigma * (1 - 1e-12):
            raise GridResolutionError(
                f"grid: p_max={self.p_max:.4g} below 8/sigma={8 / sigma:.4g}")


def default_grid(sigma: float) -> GridConfig:
    return GridConfig(DEFAULT_N, DEFAULT_PMAX_SIGMA / sigma)


def auto_grid(t: float, two_j: int, params: PhysicalParams, margin_sigma: float = 25.0,
              p_max_sigma: float = DEFAULT_PMAX_SIGMA, min_n: int = DEFAULT_N) -> GridConfig:
    """Smallest power-of-two grid whose box holds |x| <= j v t + margin.

    Group velocities are bounded by j v, so nothing travels further than
    j v t from the origin apart from the Gaussian tails covered by the margin.
    The outer 5% of the box is kept clear for the drift check.
    """
    sigma = params.sigma
    p_max = p_max_sigma / sigma
    reach = 0.5 * two_j * params.v * abs(t) + margin_sigma * sigma
    need = 2.0 * p_max * reach / (math.pi * (1.0 - 2 * EDGE_FRACTION))
    n = max(min_n, 1 << max(0, math.ceil(math.log2(max(need, 1.0)))))
    # resolution floor dp <= 1/(8 sigma)
    while 2.0 * p_max / n > 1.0 / (8.0 * sigma):
        n *= 2
    return GridConfig(n, p_max)


def _as_array_p(p):
    pa = np.asarray(p, dtype=float)
    return pa, pa.ndim == 0


def propagator_half(p, t: float, params: PhysicalParams) -> np.ndarray:
    """U(p, t) for spin 1/2: cos(Omega t/2) - i sin(Omega t/2)(cos th sigma_z + sin th sigma_y).

    Returns shape (2, 2) for scalar p, (n, 2, 2) for an array.  At the
    degenerate point Omega = 0 this is the identity.
    """
    pa, scalar = _as_array_p(p)
    mx = mixing(np.atleast_1d(pa), params)
    half = 0.5 * mx.big_omega * t
    c, s = np.cos(half), np.sin(half)
    u = np.empty(c.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c + 1j * s * mx.cos_theta
    u[..., 1, 1] = c - 1j * s * mx.cos_theta
    u[..., 0, 1] = s * mx.sin_theta
    u[..., 1, 0] = -s * mx.sin_theta
    return u[0] if scalar else u


def _rotated_frame(p, two_j: int, params: PhysicalParams):
    """Eigenvectors of cos th J_z + sin th J_y (eigenvalues M) and Omega(p)."""
    mx = mixing(np.atleast_1d(p), params)
    _, jy, jz = spin_matrices(two_j)
    gen = mx.cos_theta[:, None, None] * jz + mx.sin_theta[:, None, None] * jy
    evals, evecs = np.linalg.eigh(gen)
    return evals, evecs, mx.big_omega


def propagator_general(p, t: float, j, params: PhysicalParams) -> np.ndarray:
    """U(p, t) = exp(-i t (omega J_y + v p J_z)) for spin j by spectral decomposition.

    The generator equals Omega(p) (cos th J_z + sin th J_y), whose eigenvalues
    are M Omega(p); eigenvector phases cancel in W diag W^dagger.
    """
    from .model import _as_two_j

    two_j = _as_two_j(j)
    pa, scalar = _as_array_p(p)
    evals, evecs, big = _rotated_frame(pa, two_j, params)
    phase = np.exp(-1j * evals * (big * t)[:, None])
    u = np.einsum("nij,nj,nkj->nik", evecs, phase, evecs.conj())
    return u[0] if scalar else u


@dataclass(frozen=True)
class MomentumSpinor:
    p_grid: np.ndarray
    amps: np.ndarray  # shape (n, 2j+1)
    t: float
    two_j: int
    grid: GridConfig

    @property
    def dp(self) -> float:
        return self.grid.dp

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2) * self.dp)

    def spin_expectation(self) -> np.ndarray:
        """(<J_x>, <J_y>, <J_z>) of the evolved state."""
        out = []
        for mat in spin_matrices(self.two_j):
            out.append(np.real(np.sum(self.amps.conj() * (self.amps @ mat.T)) * self.dp))
        return np.array(out)


@dataclass(frozen=True)
class PositionAmplitudes:
    x_grid: np.ndarray
    psi: np.ndarray  # shape (n, 2j+1)
    t: float
    two_j: int

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])

    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.psi) ** 2, axis=1)

    def norm(self) -> float:
        return float(np.sum(self.density()) * self.dx)


def evolve(initial: SpinState, t: float, params: PhysicalParams,
           grid: GridConfig | None = None) -> MomentumSpinor:
    """Apply U(p, t) pointwise to phi(p) c_M on a uniform momentum grid."""
    if not math.isfinite(t):
        raise DomainError("evolve: t must be finite")
    if grid is None:
        grid = auto_grid(t, initial.two_j, params)
    grid.check(params.sigma)
    p = grid.p_grid()
    phi = gaussian_packet_momentum(p, params.sigma)
    c = initial.vector()
    if t == 0:
        amps = phi[:, None] * c[None, :]
    elif initial.two_j == 1:
        u = propagator_half(p, t, params)
        amps = (u @ c) * phi[:, None]
    else:
        evals, evecs, big = _rotated_frame(p, initial.two_j, params)
        # W e^{-i M Omega t} W^dagger c, without forming U
        coef = np.einsum("nji,j->ni", evecs.conj(), c)
        coef *= np.exp(-1j * evals * (big * t)[:, None])
        amps = np.einsum("nij,nj->ni", evecs, coef) * phi[:, None]
    return MomentumSpinor(p, amps, float(t), initial.two_j, grid)


def to_position(ms: MomentumSpinor, check_edges: bool = True) -> PositionAmplitudes:
    """psi_M(x_j) = (2 pi)^(-1/2) sum_k a_M(p_k) exp(i p_k x_j) dp via FFT.

    With x_j = x0 + j dx and p_k = p0 + k dp this is
    (2 pi)^(-1/2) dp exp(i p0 x_j) n ifft(a_k exp(i k dp x0)).
    """
    grid = ms.grid
    n = grid.n
    x = grid.x_grid()
    x0, p0, dp = x[0], ms.p_grid[0], grid.dp
    twist = np.exp(1j * dp * x0 * np.arange(n))
    psi = np.fft.ifft(ms.amps * twist[:, None], axis=0) * n
    psi *= (dp / math.sqrt(2.0 * math.pi)) * np.exp(1j * p0 * x)[:, None]
    out = PositionAmplitudes(x, psi, ms.t, ms.two_j)
    if check_edges:
        dens = out.density()
        edge = np.abs(x) > (1.0 - 2 * EDGE_FRACTION) * grid.x_half_width
        edge_mass = float(np.sum(dens[edge]) * grid.dx)
        if edge_mass > EDGE_THRESHOLD:
            raise DriftOutOfBoxError(
                f"to_position: {edge_mass:.3g} of the probability sits in the outer 5% of the box "
                f"(half-width {grid.x_half_width:.4g}); enlarge the grid")
    return out
