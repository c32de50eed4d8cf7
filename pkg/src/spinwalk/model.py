"""Physical parameters, spin states and the momentum-dependent mixing angle.

Units: hbar = 1.  A run is fixed by the precession frequency ``omega``, the
speed scale ``v`` and the initial packet width ``sigma``; the dynamics depend
on them only through ``alpha = sigma * omega / v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalParams:
    omega: float
    v: float
    sigma: float

    @property
    def alpha(self) -> float:
        return self.sigma * self.omega / self.v

    @property
    def larmor_period(self) -> float:
        if self.omega == 0:
            raise DomainError("larmor_period: undefined for omega = 0")
        return 2.0 * math.pi / self.omega

    @property
    def flight_time(self) -> float:
        """Time sigma/v needed to cross the initial packet."""
        return self.sigma / self.v

    def reduced_time(self, t: float) -> float:
        """Dimensionless v t / sigma (equal to omega t / alpha when omega > 0)."""
        return self.v * t / self.sigma


def make_params(omega: float, v: float, sigma: float) -> PhysicalParams:
    for name, value in (("omega", omega), ("v", v), ("sigma", sigma)):
        if value is None or not math.isfinite(value):
            raise DomainError(f"make_params: {name} must be a finite number")
    if v <= 0:
        raise DomainError("make_params: v must be positive")
    if sigma <= 0:
        raise DomainError("make_params: sigma must be positive")
    if omega < 0:
        raise DomainError("make_params: omega must be non-negative")
    return PhysicalParams(float(omega), float(v), float(sigma))


def params_from_alpha(alpha: float, v: float = 1.0, sigma: float = 1.0) -> PhysicalParams:
    """Parameters with the given alpha in units where v = sigma = 1 by default."""
    if alpha is None or not math.isfinite(alpha) or alpha < 0:
        raise DomainError("params_from_alpha: alpha must be finite and non-negative")
    return make_params(alpha * v / sigma, v, sigma)


@dataclass(frozen=True)
class MixingAngle:
    """cos/sin of the mixing angle theta(p) and the local frequency Omega(p).

    Fields are floats or arrays of equal shape.  ``degenerate`` marks the point
    omega = 0, p = 0, where Omega vanishes and the angle is set to theta = pi/2.
    """

    cos_theta: np.ndarray | float
    sin_theta: np.ndarray | float
    big_omega: np.ndarray | float
    degenerate: np.ndarray | bool = False


def mixing(p, params: PhysicalParams) -> MixingAngle:
    pa = np.asarray(p, dtype=float)
    vp = params.v * pa
    big = np.hypot(params.omega, vp)
    degenerate = big == 0.0
    safe = np.where(degenerate, 1.0, big)
    cos_t = np.where(degenerate, 0.0, vp / safe)
    sin_t = np.where(degenerate, 1.0, params.omega / safe)
    if pa.ndim == 0:
        return MixingAngle(float(cos_t), float(sin_t), float(big), bool(degenerate))
    return MixingAngle(cos_t, sin_t, big, degenerate)


def gaussian_packet_momentum(p, sigma: float):
    """Momentum amplitude of the initial packet, normalised so int |phi|^2 dp = 1."""
    if not sigma > 0:
        raise DomainError("gaussian_packet_momentum: sigma must be positive")
    pa = np.asarray(p, dtype=float)
    out = math.sqrt(2.0 * sigma / math.sqrt(2.0 * math.pi)) * np.exp(-(sigma * pa) ** 2)
    return float(out) if pa.ndim == 0 else out


def gaussian_packet_position(x, sigma: float):
    """Position amplitude (sqrt(2 pi) sigma)^(-1/2) exp(-x^2 / (4 sigma^2))."""
    xa = np.asarray(x, dtype=float)
    out = (math.sqrt(2.0 * math.pi) * sigma) ** -0.5 * np.exp(-xa * xa / (4.0 * sigma * sigma))
    return float(out) if xa.ndim == 0 else out


def _as_two_j(j) -> int:
    two_j = Fraction(j) * 2
    if two_j.denominator != 1 or two_j < 1:
        raise DomainError(f"spin j must be a positive half-integer, got {j!r}")
    return int(two_j)


@dataclass(frozen=True)
class SpinState:
    """Spin-j amplitudes c_M ordered M = -j, ..., +j.

    ``two_j`` stores 2j so the dimension 2j+1 is exact.
    """

    two_j: int
    coeffs: tuple = field(default=())

    def __post_init__(self):
        if self.two_j < 1:
            raise DomainError("SpinState: 2j must be >= 1")
        if len(self.coeffs) != self.two_j + 1:
            raise DomainError(f"SpinState: need {self.two_j + 1} coefficients, got {len(self.coeffs)}")
        norm = sum(abs(c) ** 2 for c in self.coeffs)
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"SpinState: coefficients not normalised (norm {norm:.3e})")

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def m_values(self) -> np.ndarray:
        return (np.arange(self.dim) - self.two_j / 2.0)

    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def weights(self) -> np.ndarray:
        return np.abs(self.vector()) ** 2


def spin_state(j, coeffs, tol: float = 1e-9) -> SpinState:
    """Build a SpinState; coefficients within ``tol`` of unit norm are renormalised."""
    two_j = _as_two_j(j)
    vec = np.asarray(coeffs, dtype=complex).ravel()
    if vec.size != two_j + 1:
        raise DomainError(f"spin_state: need {two_j + 1} coefficients for j={j}, got {vec.size}")
    norm = float(np.sum(np.abs(vec) ** 2))
    if not math.isfinite(norm) or abs(norm - 1.0) > tol:
        raise DomainError(f"spin_state: coefficients not normalised (|c|^2 sums to {norm:.12g})")
    vec = vec / math.sqrt(norm)
    return SpinState(two_j, tuple(complex(c) for c in vec))


def canonical_spin_state(label: str, j=Fraction(1, 2), custom_coeffs=None) -> SpinState:
    """Named preparations: z_plus, z_minus, y_plus, or custom coefficients.

    Coefficient order is M = -j ... +j, so for j = 1/2 the tuple is (c_-, c_+).
    ``y_plus`` is the J_y eigenvector of largest eigenvalue: c_+ = 1/sqrt(2),
    c_- = i/sqrt(2) for j = 1/2.
    """
    two_j = _as_two_j(j)
    dim = two_j + 1
    if label == "custom":
        if custom_coeffs is None:
            raise DomainError("canonical_spin_state: custom label requires coefficients")
        return spin_state(j, custom_coeffs)
    if label == "z_plus":
        vec = np.zeros(dim, complex)
        vec[-1] = 1.0
    elif label == "z_minus":
        vec = np.zeros(dim, complex)
        vec[0] = 1.0
    elif label == "y_plus":
        if two_j == 1:
            vec = np.array([1j, 1.0]) / math.sqrt(2.0)
        else:
            vals, vecs = np.linalg.eigh(spin_matrices(two_j)[1])
            vec = vecs[:, np.argmax(vals)]
            # fix the global phase so the M = +j component is real positive
            vec = vec * np.exp(-1j * np.angle(vec[-1]))
    else:
        raise DomainError(f"canonical_spin_state: unknown label {label!r}")
    return SpinState(two_j, tuple(complex(c) for c in vec))


def spin_matrices(two_j: int):
    """(J_x, J_y, J_z) in the basis M = -j ... +j, hbar = 1."""
    j = two_j / 2.0
    m = np.arange(two_j + 1) - j
    # <M+1|J_+|M> = sqrt(j(j+1) - M(M+1))
    up = np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1))
    jp = np.diag(up, -1).astype(complex)
    jm = jp.conj().T
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    jz = np.diag(m).astype(complex)
    return jx, jy, jz
