"""Special functions on the real line: the probability integral, Bessel J1/Y1/K1
and the Hankel function of the second kind of order one.

Everything is vectorised over numpy arrays; scalar input gives scalar output.
Only real, positive arguments are supported for the Bessel family.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

SQRT_PI = math.sqrt(math.pi)
EULER_GAMMA = 0.57721566490153286061

# Power series below this argument, Hankel asymptotic expansion above it.
# The asymptotic series' smallest term is ~exp(-2x); 13 keeps both branches
# below 1e-11 of the envelope.
BESSEL_SWITCH = 13.0
_ERF_SERIES_MAX = 3.0
_ERFCX_CF_MIN = 2.0


def _scalar_or_array(x, out):
    if np.ndim(x) == 0:
        return out.reshape(()).item()
    return out


def _erf_series(z):
    # erf(z) = 2/sqrt(pi) exp(-z^2) sum 2^n z^(2n+1) / (2n+1)!!  (all terms positive)
    z2 = z * z
    term = z.copy()
    total = z.copy()
    for n in range(1, 200):
        term = term * (2.0 * z2) / (2 * n + 1)
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return 2.0 / SQRT_PI * np.exp(-z2) * total


def _erfcx_cf(z):
    """exp(z^2) erfc(z) for z >= 2 by the Laplace continued fraction (modified Lentz)."""
    tiny = 1e-300
    f = z.copy()
    c = z.copy()
    d = np.zeros_like(z)
    for n in range(1, 500):
        a = 0.5 * n
        d = z + a * d
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = z + a / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = c * d
        f = f * delta
        if np.all(np.abs(delta - 1.0) < 1e-16):
            break
    return 1.0 / (SQRT_PI * f)


def probability_integral(z):
    """Phi(z) = 2/sqrt(pi) * int_0^z exp(-t^2) dt (the error function)."""
    za = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(za)):
        raise DomainError("probability_integral: argument must be finite")
    a = np.abs(np.atleast_1d(za))
    out = np.empty_like(a)
    small = a <= _ERF_SERIES_MAX
    if np.any(small):
        out[small] = _erf_series(a[small])
    if np.any(~small):
        big = a[~small]
        out[~small] = 1.0 - np.exp(-big * big) * _erfcx_cf(big)
    out = np.sign(np.atleast_1d(za)) * out
    return _scalar_or_array(z, out)


def erfc_scaled(z):
    """exp(z^2) * (1 - Phi(z)) for z >= 0, free of overflow at large z."""
    za = np.asarray(z, dtype=float)
    if np.any(za < 0) or not np.all(np.isfinite(za)):
        raise DomainError("erfc_scaled: argument must be finite and non-negative")
    a = np.atleast_1d(za).copy()
    out = np.empty_like(a)
    cf = a >= _ERFCX_CF_MIN
    if np.any(cf):
        out[cf] = _erfcx_cf(a[cf])
    if np.any(~cf):
        s = a[~cf]
        out[~cf] = np.exp(s * s) * (1.0 - _erf_series(s))
    return _scalar_or_array(z, out)


def _hankel_pq(x, order=1):
    """Asymptotic P, Q for order 0 or 1, summed up to the smallest term."""
    mu = 4.0 * order * order
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 80):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        active &= (mag < prev) & (mag > 1e-18)
        if not np.any(active):
            break
        contrib = np.where(active, term, 0.0)
        # a_k / x^k enters Q with sign (-1)^((k-1)/2) for odd k, P with (-1)^(k/2) for even k
        if k % 2:
            q = q + (-1) ** ((k - 1) // 2) * contrib
        else:
            p = p + (-1) ** (k // 2) * contrib
        prev = np.where(active, mag, prev)
    return p, q


def _j1_y1_asymptotic(x, order=1):
    p, q = _hankel_pq(x, order)
    chi = x - (0.5 * order + 0.25) * math.pi
    amp = np.sqrt(2.0 / (math.pi * x))
    c, s = np.cos(chi), np.sin(chi)
    return amp * (p * c - q * s), amp * (p * s + q * c)


def _j1_y1_series(x):
    h = 0.5 * x
    h2 = h * h
    term = h.copy()  # (x/2)^(2k+1) / (k! (k+1)!) with sign
    j = np.zeros_like(x)
    tail = np.zeros_like(x)
    psi_k1 = -EULER_GAMMA  # psi(k+1)
    psi_k2 = 1.0 - EULER_GAMMA  # psi(k+2)
    for k in range(0, 60):
        j = j + term
        tail = tail + (psi_k1 + psi_k2) * term
        if np.all(np.abs(term) < 1e-18 * np.maximum(np.abs(j), 1e-300)) and k > 2:
            break
        term = -term * h2 / ((k + 1) * (k + 2))
        psi_k1 += 1.0 / (k + 1)
        psi_k2 += 1.0 / (k + 2)
    y = (2.0 / math.pi) * j * np.log(h) - 2.0 / (math.pi * x) - tail / math.pi
    return j, y


def _j0_y0_series(x):
    h2 = 0.25 * x * x
    term = np.ones_like(x)  # (-1)^k (x/2)^(2k) / (k!)^2
    j = np.zeros_like(x)
    tail = np.zeros_like(x)
    harmonic = 0.0
    for k in range(0, 60):
        j = j + term
        tail = tail - harmonic * term
        if k > 2 and np.all(np.abs(term) < 1e-18 * np.maximum(np.abs(j), 1e-300)):
            break
        term = -term * h2 / ((k + 1) * (k + 1))
        harmonic += 1.0 / (k + 1)
    y = (2.0 / math.pi) * ((np.log(0.5 * x) + EULER_GAMMA) * j + tail)
    return j, y


def _j1_y1(x, order=1):
    j = np.empty_like(x)
    y = np.empty_like(x)
    small = x <= BESSEL_SWITCH
    series = _j1_y1_series if order == 1 else _j0_y0_series
    if np.any(small):
        j[small], y[small] = series(x[small])
    if np.any(~small):
        j[~small], y[~small] = _j1_y1_asymptotic(x[~small], order)
    return j, y


def bessel_j0(x):
    """Bessel J0, used for derivatives through C1' = C0 - C1/x."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise DomainError("bessel_j0: argument must be finite and non-negative")
    out = np.ones_like(xa)
    pos = xa > 0
    if np.any(pos):
        out[pos] = _j1_y1(xa[pos], 0)[0]
    return _scalar_or_array(x, out)


def bessel_y0(x):
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 0) or not np.all(np.isfinite(xa)):
        raise DomainError("bessel_y0: argument must be finite and positive")
    return _scalar_or_array(x, _j1_y1(xa, 0)[1])


def bessel_wronskian(x):
    """J1 Y1' - J1' Y1 with primes from C1' = C0 - C1/x; equals 2/(pi x)."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    j1, y1 = _j1_y1(xa, 1)
    j0, y0 = _j1_y1(xa, 0)
    out = j1 * (y0 - y1 / xa) - (j0 - j1 / xa) * y1
    return _scalar_or_array(x, out)


def bessel_j1(x):
    """Bessel function of the first kind, order one, for x >= 0."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise DomainError("bessel_j1: argument must be finite and non-negative")
    out = np.zeros_like(xa)
    pos = xa > 0
    if np.any(pos):
        out[pos] = _j1_y1(xa[pos])[0]
    return _scalar_or_array(x, out)


def bessel_y1(x):
    """Bessel function of the second kind, order one, for x > 0."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 0) or not np.all(np.isfinite(xa)):
        raise DomainError("bessel_y1: argument must be finite and positive")
    return _scalar_or_array(x, _j1_y1(xa)[1])


def hankel2_1(x):
    """H1^(2)(x) = J1(x) - i Y1(x) for x > 0."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 0) or not np.all(np.isfinite(xa)):
        raise DomainError("hankel2_1: argument must be finite and positive")
    j, y = _j1_y1(xa)
    return _scalar_or_array(x, j - 1j * y)


_K_STEP = 0.05


def bessel_k1(x):
    """Modified Bessel function K1(x) for x > 0.

    Trapezoid rule on K1(x) = int_0^inf exp(-x cosh u) cosh u du; the integrand
    is entire and decays double-exponentially, so the rule converges geometrically.
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 0) or not np.all(np.isfinite(xa)):
        raise DomainError("bessel_k1: argument must be finite and positive")
    out = np.zeros_like(xa)
    # the peak at u=0 narrows like x**-0.5, so the step is chosen per octave-pair of x
    band = np.floor(np.log(np.clip(xa, 1e-300, None)) / math.log(4.0))
    for b in np.unique(band[xa < 740.0]):
        sel = (band == b) & (xa < 740.0)
        z = xa[sel]
        step = min(_K_STEP, 0.4 / math.sqrt(float(z.max())))
        u_max = math.acosh(max(745.0 / float(z.min()), 1.0)) + 1.0
        u = np.arange(0.0, u_max + step, step)
        w = np.full(u.shape, step)
        w[0] = 0.5 * step
        ch = np.cosh(u)
        vals = np.empty_like(z)
        for start in range(0, z.size, 2048):
            zz = z[start:start + 2048, None]
            vals[start:start + 2048] = (np.exp(-zz * ch) * ch) @ w
        out[sel] = vals
    return _scalar_or_array(x, out)
