"""Small- and large-alpha approximations of the symmetric density.

Notation: X = x / sigma, c = v t / sigma, beta = alpha^2 c / 4.

The convolution kernel is f(X) = (1/2 pi) int_0^inf exp(i (X k - beta / k)) dk.
Its closed form depends on the sign of X:

    X < 0:  f = -(alpha/4) sqrt(c/|X|) H1^(2)(alpha sqrt(c |X|))
    X > 0:  f = (i alpha / 2 pi) sqrt(c/X) K1(alpha sqrt(c X))

For X > 0 the stationary point k = sqrt(-beta/X) is imaginary, so the
integral is evanescent; writing the Hankel form with sgn(X) for both
sides (``form="hankel"``) does not reproduce it there.  Both forms are
available.

The small-alpha density uses the real part K = 2 Re f on the half line
X' < 0, K(X') = -(alpha/2) sqrt(c/|X'|) J1(alpha sqrt(c |X'|)), in

    psi_+(X) = N [ g(X - c/2) + int_{-inf}^0 g(X - X' - c/2) K(X') dX' ],
    g(u) = exp(-u^2/4),  N = (2^{3/4} pi^{1/4} sigma^{1/2})^{-1},
    P(x) = |psi_+(X)|^2 + |psi_+(-X)|^2.

Substituting X' = -u^2 removes the |X'|^{-1/2} endpoint behaviour.
"""

from __future__ import annotations

import math

import numpy as np

from .density import DensityProfile, make_profile
from .errors import DomainError
from .model import PhysicalParams
from .quadrature import composite_nodes
from .specfun import bessel_j1, bessel_k1, hankel2_1

_WINDOW = 16.0  # exp(-16^2/4) ~ 1e-28


def _check_kernel_args(X, t, params):
    if params.alpha <= 0:
        raise DomainError("kernel: alpha must be positive")
    if t <= 0:
        raise DomainError("kernel: t must be positive")
    Xa = np.asarray(X, dtype=float)
    if np.any(Xa == 0):
        raise DomainError("kernel: X = 0 is a singular point")
    return Xa


def kernel_f(X, t: float, params: PhysicalParams, form: str = "exact"):
    """Closed form of f(X, t); ``form`` is "exact" (sign-aware) or "hankel" (sgn(X) H1^(2) on both sides)."""
    Xa = _check_kernel_args(X, t, params)
    alpha = params.alpha
    c = params.v * t / params.sigma
    flat = np.atleast_1d(Xa)
    absx = np.abs(flat)
    z = alpha * np.sqrt(c * absx)
    pref = np.sqrt(c / absx)
    if form == "hankel":
        out = (alpha / 4) * np.sign(flat) * pref * hankel2_1(z)
    elif form == "exact":
        out = np.empty(flat.shape, dtype=complex)
        neg = flat < 0
        if np.any(neg):
            out[neg] = -(alpha / 4) * pref[neg] * hankel2_1(z[neg])
        if np.any(~neg):
            out[~neg] = 1j * alpha / (2 * math.pi) * pref[~neg] * bessel_k1(z[~neg])
    else:
        raise DomainError(f"kernel_f: unknown form {form!r}")
    return complex(out[0]) if Xa.ndim == 0 else out


def kernel_f_bruteforce(X: float, t: float, params: PhysicalParams, damping: float = 1e-3,
                        nodes: int = 4_000_000) -> complex:
    """(1/2 pi) int_0^inf exp(i(X k - beta/k) - damping k) dk on a log grid.

    Independent check of the closed forms; the small damping regularises the
    slowly decaying tail and biases the result by O(damping).
    """
    alpha = params.alpha
    c = params.v * t / params.sigma
    beta = alpha * alpha * c / 4
    u = np.linspace(-25.0, math.log(60.0 / damping), nodes)
    k = np.exp(u)
    g = np.exp(1j * (X * k - beta / k) - damping * k) * k
    return complex(np.trapezoid(g, u) / (2 * math.pi))


def kernel_F(X, t: float, params: PhysicalParams, f_only: bool = False, form: str = "exact"):
    """F(X, t) ~ f(X, t) - f(X + c/2, t); with ``f_only`` just f(X, t)."""
    first = kernel_f(X, t, params, form)
    if f_only:
        return first
    shift = 0.5 * params.v * t / params.sigma
    return first - kernel_f(np.asarray(X, dtype=float) + shift, t, params, form)


def bessel_kernel(Xp, t: float, params: PhysicalParams):
    """K(X') = 2 Re f(X') for X' < 0; K(0) = -alpha^2 c / 4."""
    alpha = params.alpha
    c = params.v * t / params.sigma
    Xa = np.atleast_1d(np.asarray(Xp, dtype=float))
    if np.any(Xa > 0):
        raise DomainError("bessel_kernel: defined for X' <= 0")
    out = np.full(Xa.shape, -alpha * alpha * c / 4)
    nz = Xa < 0
    z = alpha * np.sqrt(c * np.abs(Xa[nz]))
    out[nz] = -(alpha / 2) * np.sqrt(c / np.abs(Xa[nz])) * bessel_j1(z)
    return out if np.ndim(Xp) else float(out[0])


def _u_window(center_sq: float):
    """u-interval where exp(-(u^2 - center_sq)^2 / 4) is non-negligible, or None."""
    hi = center_sq + _WINDOW
    if hi <= 0:
        return None
    lo = max(0.0, center_sq - _WINDOW)
    return math.sqrt(lo), math.sqrt(hi)


def _panel_rule(u_lo, u_hi, kscale):
    h = min(0.5 / max(u_hi, 1.0), 1.0 / max(kscale, 1e-12))
    panels = max(2, math.ceil((u_hi - u_lo) / h))
    return composite_nodes(u_lo, u_hi, panels)


def _psi_plus_bessel(X: np.ndarray, c: float, alpha: float) -> np.ndarray:
    ks = alpha * math.sqrt(c)
    out = np.exp(-0.25 * (X - 0.5 * c) ** 2)
    for i, Xi in enumerate(X):
        win = _u_window(0.5 * c - Xi)
        if win is None:
            continue
        u, w = _panel_rule(win[0], win[1], ks)
        # dX' = -2u du turns sqrt(c/|X'|) J1 into the smooth -alpha sqrt(c) J1(alpha sqrt(c) u)
        integrand = np.exp(-0.25 * (Xi + u * u - 0.5 * c) ** 2) * bessel_j1(ks * u)
        out[i] -= ks * np.sum(w * integrand)
    return out


def _hankel_convolution(X: np.ndarray, c: float, alpha: float) -> np.ndarray:
    """int dX' exp(-(X - X' - c/2)^2/4) H1^(2)(alpha sqrt(c |X'|)) over the whole line."""
    ks = alpha * math.sqrt(c)
    out = np.zeros(X.shape, dtype=complex)
    for i, Xi in enumerate(X):
        total = 0.0 + 0.0j
        for sgn in (-1.0, 1.0):
            # X' = sgn u^2, so the Gaussian centre sits at u^2 = sgn (Xi - c/2)
            win = _u_window(sgn * (Xi - 0.5 * c))
            if win is None:
                continue
            u, w = _panel_rule(win[0], win[1], ks)
            g = np.exp(-0.25 * (Xi - sgn * u * u - 0.5 * c) ** 2)
            total += np.sum(w * 2 * u * g * hankel2_1(ks * u))
        out[i] = total
    return out


def density_small_alpha(x_grid, t: float, params: PhysicalParams, kernel: str = "bessel") -> DensityProfile:
    """Small-alpha approximation of the y_plus density (documented validity alpha <= 0.3).

    ``kernel="bessel"`` is the corrected convolution described in the module
    docstring.  ``kernel="hankel"`` evaluates the one-sided Hankel expression
    alpha^2 / (16 (2 pi)^{3/2}) |int dX' e^{-(X - X' - c/2)^2/4} H1^(2)(alpha sqrt(c|X'|))|^2
    literally (per unit sigma).
    """
    if t <= 0:
        raise DomainError("density_small_alpha: t must be positive")
    alpha = params.alpha
    if alpha <= 0:
        raise DomainError("density_small_alpha: alpha must be positive")
    x = np.asarray(x_grid, dtype=float)
    X = x / params.sigma
    c = params.v * t / params.sigma
    if kernel == "bessel":
        norm = 1.0 / (2 ** 0.75 * math.pi ** 0.25 * math.sqrt(params.sigma))
        P = norm ** 2 * (_psi_plus_bessel(X, c, alpha) ** 2 + _psi_plus_bessel(-X, c, alpha) ** 2)
        method = "small_alpha_bessel"
    elif kernel == "hankel":
        conv = _hankel_convolution(X, c, alpha)
        P = alpha ** 2 / (16 * (2 * math.pi) ** 1.5) * np.abs(conv) ** 2 / params.sigma
        method = "small_alpha_hankel"
    else:
        raise DomainError(f"density_small_alpha: unknown kernel {kernel!r}")
    return make_profile(x, P, t, params, method)


def large_alpha_width(t, params: PhysicalParams):
    """Delta(t) = sigma [1 + (v^2 t / (4 sigma^2 omega))^2]^(1/2)."""
    if params.omega == 0:
        raise DomainError("large_alpha_width: omega must be positive")
    t = np.asarray(t, dtype=float)
    out = params.sigma * np.sqrt(1 + (params.v ** 2 * t / (4 * params.sigma ** 2 * params.omega)) ** 2)
    return float(out) if out.ndim == 0 else out


def density_large_alpha(x_grid, t: float, params: PhysicalParams) -> DensityProfile:
    """Gaussian of width Delta(t) centred at the origin (documented validity alpha >= 3)."""
    x = np.asarray(x_grid, dtype=float)
    d = large_alpha_width(t, params)
    P = np.exp(-x * x / (2 * d * d)) / (math.sqrt(2 * math.pi) * d)
    return make_profile(x, P, t, params, "large_alpha_gaussian")
