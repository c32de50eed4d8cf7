"""Spin and position observables for |M> preparations.

Orbital averages are <f> = sqrt(2/pi) int exp(-2 xi^2) f(xi) d xi with
xi = sigma p.  In these variables Omega t = s c where s = sqrt(alpha^2 + xi^2)
and c = v t / sigma = omega t / alpha, cos(theta) = xi / s, sin(theta) = alpha / s.

Oscillatory averages go through the real-axis Gauss-Legendre engine while
the node count stays moderate; for very long times or tiny alpha the contour
is rotated to xi = tau exp(i pi/6), where exp(i c s) decays instead of
oscillating.  Both routes can be forced through ``method``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalFailure
from .model import PhysicalParams, mixing
from .quadrature import (
    MAX_NODES,
    gaussian_spec,
    integrate_along_ray,
    integrate_gaussian_oscillatory,
    time_average,
)
from .specfun import erfc_scaled

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
RAY_ANGLE = math.pi / 6
# the real-axis engine is used while its first pass needs fewer nodes than this
REAL_AXIS_NODE_BUDGET = 1 << 16
_TIME_CHUNK = 256


@dataclass(frozen=True)
class PrecessionVectors:
    e_x: np.ndarray | float
    e_y: np.ndarray | float
    e_z: np.ndarray | float
    T_x: np.ndarray | float
    T_y: np.ndarray | float
    T_z: np.ndarray | float


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.times)
        if t.shape != np.asarray(self.values).shape[:1]:
            raise DomainError("TimeSeries: times and values differ in length")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise DomainError("TimeSeries: times must be strictly increasing")


def precession_vectors(p, t, params: PhysicalParams) -> PrecessionVectors:
    """e_u(p, t) and their time integrals T_u(p, t)."""
    mx = mixing(p, params)
    ct, st, big = (np.asarray(a, dtype=float) for a in (mx.cos_theta, mx.sin_theta, mx.big_omega))
    t = np.asarray(t, dtype=float)
    ph = big * t
    cos_ph, sin_ph = np.cos(ph), np.sin(ph)
    e_x = -st * sin_ph
    e_y = st * ct * (1.0 - cos_ph)
    e_z = ct * ct + st * st * cos_ph
    deg = big == 0.0
    safe = np.where(deg, 1.0, big)
    # (1 - cos) / Omega and sin / Omega, with their Omega -> 0 limits 0 and t
    one_minus = np.where(deg, 0.0, (1.0 - cos_ph) / safe)
    sinc_t = np.where(deg, t, sin_ph / safe)
    T_x = -st * one_minus
    T_y = st * ct * (t - sinc_t)
    T_z = ct * ct * t + st * st * sinc_t
    if deg.any():
        # Omega = 0 means no field and p = 0: the spin does not move at all
        T_x = np.where(deg, 0.0, T_x)
        T_y = np.where(deg, 0.0, T_y)
        T_z = np.where(deg, t, T_z)
    vals = [e_x, e_y, e_z, T_x, T_y, T_z]
    if all(np.ndim(v) == 0 for v in vals):
        vals = [float(v) for v in vals]
    return PrecessionVectors(*vals)


def _check(res, what):
    if not res.converged:
        raise NumericalFailure(f"{what}: quadrature did not converge (est. error {res.est_error:.3g})")
    return res.value


def _real_axis_nodes(rate: float) -> int:
    return gaussian_spec(2.0, rate).initial_nodes


def _choose(method: str, rate: float) -> str:
    if method == "auto":
        return "real" if _real_axis_nodes(rate) <= REAL_AXIS_NODE_BUDGET else "ray"
    if method not in ("real", "ray"):
        raise DomainError(f"unknown quadrature method {method!r}")
    return method


def _oscillatory_average(alpha: float, c: np.ndarray, kernel, method: str, tol: float) -> np.ndarray:
    """sqrt(2/pi) int exp(-2 xi^2) kernel(xi, s) exp(i c s) d xi for each c (kernel even in xi).

    Returns complex values; callers take Re or Im.
    """
    c = np.asarray(c, dtype=float)
    out = np.empty(c.shape, dtype=complex)
    flat_c = c.ravel()
    flat = out.ravel()
    for start in range(0, flat_c.size, _TIME_CHUNK):
        cc = flat_c[start:start + _TIME_CHUNK]
        route = _choose(method, float(cc.max()))
        if route == "real":
            def g(xi, cc=cc):
                s = np.sqrt(alpha * alpha + xi * xi)
                return kernel(xi, s)[:, None] * np.exp(1j * s[:, None] * cc[None, :])

            spec = gaussian_spec(2.0, float(cc.max()), target_abs_err=tol, max_nodes=MAX_NODES)
            val = _check(integrate_gaussian_oscillatory(g, spec), "oscillatory average")
            flat[start:start + cc.size] = SQRT_2_OVER_PI * val
        else:
            def f(xi, cc=cc):
                s = np.sqrt(alpha * alpha + xi * xi)
                return (kernel(xi, s) * np.exp(-2.0 * xi * xi))[:, None] * np.exp(1j * s[:, None] * cc[None, :])

            # even integrand: the real line is twice the half line, and the
            # half line may be rotated since f is analytic for 0 < arg xi < pi/4
            inner = max(min(alpha, 1.0 / max(float(cc.max()), 1e-300)), 1e-12)
            res = integrate_along_ray(f, RAY_ANGLE, 7.0, inner, target_abs_err=tol)
            flat[start:start + cc.size] = 2.0 * SQRT_2_OVER_PI * _check(res, "oscillatory average (ray)")
    return out


def cos2_average(alpha: float) -> float:
    """<cos^2 theta> by quadrature; equals eta_bar(alpha)."""
    if alpha < 0:
        raise DomainError("cos2_average: alpha must be non-negative")
    if alpha == 0:
        return 1.0
    res = integrate_along_ray(lambda xi: np.exp(-2 * xi * xi) * xi * xi / (alpha * alpha + xi * xi),
                              0.0, 7.0, alpha, target_abs_err=1e-14)
    return float(2 * SQRT_2_OVER_PI * np.real(_check(res, "cos2_average")))


def cos4_average(alpha: float) -> float:
    """<cos^4 theta> = sqrt(2/pi) int exp(-2 xi^2) xi^4 / (alpha^2 + xi^2)^2 d xi."""
    if alpha < 0:
        raise DomainError("cos4_average: alpha must be non-negative")
    if alpha == 0:
        return 1.0
    res = integrate_along_ray(lambda xi: np.exp(-2 * xi * xi) * (xi * xi / (alpha * alpha + xi * xi)) ** 2,
                              0.0, 7.0, alpha, target_abs_err=1e-14)
    return float(2 * SQRT_2_OVER_PI * np.real(_check(res, "cos4_average")))


def cos4_average_closed_form(alpha: float) -> float:
    """Candidate closed form 1 + a^2 - sqrt(2 pi) a (3 + 4 a^2) e^{2a^2}(1 - Phi(sqrt2 a)).

    Kept only for comparison; it is not <cos^4 theta> (it turns negative).
    """
    return 1.0 + alpha ** 2 - math.sqrt(2 * math.pi) * alpha * (3 + 4 * alpha ** 2) * erfc_scaled(math.sqrt(2) * alpha)


def eta_bar(alpha: float) -> float:
    """Long-time average of eta: 1 - sqrt(2 pi) alpha e^{2 alpha^2} [1 - Phi(sqrt(2) alpha)]."""
    if alpha < 0 or not math.isfinite(alpha):
        raise DomainError("eta_bar: alpha must be finite and non-negative")
    # e^{z^2} erfc(z) directly; 1 - Phi(z) cancels badly already near z ~ 4
    scaled = erfc_scaled(math.sqrt(2.0) * alpha)
    return 1.0 - math.sqrt(2.0 * math.pi) * alpha * scaled


def eta(omega_t, alpha: float, method: str = "auto", tol: float = 1e-10):
    """eta(t) = <J_z>(t) / <J_z>(0) for a |M> preparation, as a function of omega t.

    eta = <cos^2> + <sin^2 cos(Omega t)>; the first term is eta_bar.
    """
    if alpha < 0 or not math.isfinite(alpha):
        raise DomainError("eta: alpha must be finite and non-negative")
    wt = np.asarray(omega_t, dtype=float)
    if alpha == 0:
        out = np.ones_like(wt)
    else:
        osc = _oscillatory_average(alpha, np.abs(wt) / alpha,
                                   lambda xi, s: (alpha / s) ** 2, method, tol)
        out = eta_bar(alpha) + osc.real
    return float(out) if wt.ndim == 0 else out


def eta_asymptotic(omega_t, alpha: float):
    """eta_bar + (2 alpha / sqrt(omega t)) cos(omega t + pi/4); valid for omega t >~ 20."""
    wt = np.asarray(omega_t, dtype=float)
    if alpha == 0:
        out = np.ones_like(wt)
    else:
        out = eta_bar(alpha) + 2 * alpha / np.sqrt(wt) * np.cos(wt + math.pi / 4)
    return float(out) if wt.ndim == 0 else out


def mean_x(t, M: float, params: PhysicalParams, method: str = "auto", tol: float = 1e-10):
    """<x>(t) for an initial |M> state (packet centred at the origin)."""
    t = np.asarray(t, dtype=float)
    alpha = params.alpha
    drift = M * params.v * t
    if alpha == 0:
        out = drift.copy()
    else:
        c = params.v * np.abs(t) / params.sigma
        osc = _oscillatory_average(alpha, c, lambda xi, s: s ** -3, method, tol)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = np.where(c > 0, alpha * alpha * osc.imag / np.where(c > 0, c, 1.0), 1.0 - eta_bar(alpha))
        out = drift * (eta_bar(alpha) + corr)
    return float(out) if out.ndim == 0 else out


def mean_x_asymptotic(t, M: float, params: PhysicalParams):
    t = np.asarray(t, dtype=float)
    alpha = params.alpha
    wt = params.omega * t
    out = M * params.v * t * (eta_bar(alpha) + 2 * alpha / wt ** 1.5 * np.sin(wt + math.pi / 4))
    return float(out) if out.ndim == 0 else out


def t_moments(t: float, params: PhysicalParams, tol: float = 1e-10):
    """(<T_x^2 + T_y^2>, <T_z^2>, <T_z>) in units of (sigma / v)^k."""
    alpha = params.alpha
    c = params.v * abs(t) / params.sigma
    if alpha == 0:
        return 0.0, c * c, c

    def g(xi):
        s2 = alpha * alpha + xi * xi
        s = np.sqrt(s2)
        cs, sn = np.cos(s * c), np.sin(s * c)
        tx = -alpha * (1 - cs) / s2
        ty = alpha * xi / s2 * (c - sn / s)
        tz = xi * xi / s2 * c + alpha * alpha / s2 * sn / s
        return np.stack([tx * tx + ty * ty, tz * tz, tz], axis=1)

    spec = gaussian_spec(2.0, c, target_abs_err=tol * max(1.0, c * c))
    val = _check(integrate_gaussian_oscillatory(g, spec), "t_moments")
    return tuple(float(SQRT_2_OVER_PI * v) for v in val)


def variance_x(t: float, j, M: float, params: PhysicalParams) -> float:
    """Delta x^2(t) for psi(x) |M>:
    sigma^2 + v^2 [ (j(j+1) - M^2)/2 <T_x^2 + T_y^2> + M^2 (<T_z^2> - <T_z>^2) ].
    """
    j = float(j)
    if abs(M) > j or (j - M) % 1:
        raise DomainError(f"variance_x: M={M} is not a J_z quantum number for j={j}")
    txy, tz2, tz = t_moments(t, params)
    sig2 = params.sigma ** 2
    return sig2 + sig2 * (0.5 * (j * (j + 1) - M * M) * txy + M * M * (tz2 - tz * tz))


def spread_velocity(alpha: float) -> float:
    """V(alpha) = (1/2) <cos^4 theta>^(1/2), in units of v."""
    return 0.5 * math.sqrt(cos4_average(alpha))


def spread_rate_y_plus(alpha: float) -> float:
    """Long-time Delta x / (v t) of the evolved y_plus packet: (1/2) <cos^2 theta>^(1/2)."""
    return 0.5 * math.sqrt(cos2_average(alpha))


def spread_rate_z_plus(alpha: float) -> float:
    """Long-time Delta x / (v t) for |+1/2>: (1/2) sqrt(eta_bar (1 - eta_bar))."""
    eb = eta_bar(alpha)
    return 0.5 * math.sqrt(eb * (1.0 - eb))


def eta_series(omega_t, alpha: float, **kw) -> TimeSeries:
    wt = np.asarray(omega_t, dtype=float)
    return TimeSeries(wt, np.atleast_1d(eta(wt, alpha, **kw)), "eta")


def time_average_eta(alpha: float, start_wt: float, window_wt: float, samples: int = 4001) -> float:
    """Trapezoid average of eta over omega t in [start_wt, start_wt + window_wt]."""
    return time_average(lambda wt: eta(wt, alpha), start_wt, window_wt, samples, vectorized=True)
