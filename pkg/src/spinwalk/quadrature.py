"""Quadrature for Gaussian-weighted, oscillatory integrands.

The workhorse is :func:`integrate_gaussian_oscillatory`, a composite
Gauss-Legendre rule on a truncated interval [-L, L] whose panel count grows
with the oscillation rate of the integrand and is doubled until two successive
estimates agree.  :func:`integrate_along_ray` handles integrands that are
analytic in a sector of the upper half plane and whose phase grows too fast
for a real-axis rule: rotating the path turns the oscillation into decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

GL_ORDER = 16
MAX_NODES = 2 ** 20
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)
_LOG_CUTOFF = math.log(1e18)


@dataclass(frozen=True)
class QuadratureSpec:
    half_width: float
    base_nodes: int = 256
    oscillation_rate: float = 0.0
    target_abs_err: float = 1e-10
    weight_coeff: float = 2.0
    nodes_per_period: int = 8
    max_nodes: int = MAX_NODES

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError("QuadratureSpec: half_width must be positive")
        if math.exp(-self.weight_coeff * self.half_width ** 2) >= 1e-18:
            raise DomainError("QuadratureSpec: half_width too small for the Gaussian weight")
        if self.nodes_per_period < 8:
            raise DomainError("QuadratureSpec: nodes_per_period must be >= 8")
        if self.oscillation_rate < 0 or self.target_abs_err <= 0:
            raise DomainError("QuadratureSpec: oscillation_rate >= 0 and target_abs_err > 0 required")

    @property
    def initial_nodes(self) -> int:
        periods = 2.0 * self.half_width * self.oscillation_rate / (2.0 * math.pi)
        n = max(self.base_nodes, math.ceil(max(periods, self.oscillation_rate) * self.nodes_per_period))
        return GL_ORDER * math.ceil(n / GL_ORDER)


def gaussian_spec(weight_coeff: float = 2.0, oscillation_rate: float = 0.0,
                  target_abs_err: float = 1e-10, **kw) -> QuadratureSpec:
    """Spec whose truncation makes exp(-weight_coeff L^2) < 1e-18."""
    half_width = math.sqrt(_LOG_CUTOFF / weight_coeff) * 1.02
    return QuadratureSpec(half_width=half_width, oscillation_rate=float(oscillation_rate),
                          target_abs_err=target_abs_err, weight_coeff=weight_coeff, **kw)


@dataclass
class QuadratureResult:
    value: complex | np.ndarray
    est_error: float
    nodes_used: int
    converged: bool
    history: list = field(default_factory=list)


def composite_nodes(lo: float, hi: float, panels: int):
    """Nodes and weights of a composite Gauss-Legendre rule with equal panels."""
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    weights = (half[:, None] * _GL_W[None, :]).ravel()
    return nodes, weights


def _apply(g, nodes, weights, weight_coeff):
    vals = np.asarray(g(nodes))
    w = weights * np.exp(-weight_coeff * nodes * nodes)
    if vals.ndim == 1:
        return np.sum(w * vals)
    return np.sum(w[:, None] * vals, axis=0)


def integrate_gaussian_oscillatory(g: Callable, spec: QuadratureSpec) -> QuadratureResult:
    """int_{-L}^{L} exp(-a xi^2) g(xi) d xi with a = spec.weight_coeff.

    ``g`` maps an array of nodes to values of the same length, or to an array of
    shape (nodes, k) to integrate k integrands at once.  Error is estimated by
    doubling the node count; the error of a vector result is its worst component.
    """
    L = spec.half_width
    nodes_n = spec.initial_nodes
    prev = None
    history = []
    value = None
    while nodes_n <= spec.max_nodes:
        x, w = composite_nodes(-L, L, nodes_n // GL_ORDER)
        value = _apply(g, x, w, spec.weight_coeff)
        if prev is not None:
            err = float(np.max(np.abs(np.asarray(value) - np.asarray(prev))))
            history.append(err)
            if err <= spec.target_abs_err:
                return QuadratureResult(value, err, nodes_n, True, history)
        prev = value
        nodes_n *= 2
    err = history[-1] if history else math.inf
    return QuadratureResult(value, err, nodes_n // 2, False, history)


def integrate_along_ray(f: Callable, angle: float, tau_max: float, inner_scale: float,
                        target_abs_err: float = 1e-12, growth: float = 1.25,
                        max_refinements: int = 6) -> QuadratureResult:
    """int_0^inf f(xi) d xi along the ray xi = tau exp(i angle), 0 <= tau <= tau_max.

    ``f`` must be analytic in the sector between the real axis and the ray and
    vanish on the closing arc; it receives complex nodes (real ones for
    angle = 0) and may return shape (nodes,) or (nodes, k).  Panels are graded
    geometrically from ``inner_scale``, so features at very different scales
    are resolved with a few hundred nodes.
    """
    if not (0 <= angle < math.pi / 2) or tau_max <= 0 or inner_scale <= 0:
        raise DomainError("integrate_along_ray: need 0 <= angle < pi/2 and positive scales")
    h0 = min(inner_scale, tau_max) / 4.0
    edges = [0.0, h0]
    while edges[-1] < tau_max:
        step = min((edges[-1] - edges[-2]) * growth, max(tau_max / 8.0, h0))
        edges.append(min(edges[-1] + step, tau_max))
    edges = np.asarray(edges)
    direction = complex(math.cos(angle), math.sin(angle)) if angle else 1.0

    def rule(e):
        half = 0.5 * np.diff(e)
        mid = 0.5 * (e[:-1] + e[1:])
        tau = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        w = (half[:, None] * _GL_W[None, :]).ravel()
        vals = np.asarray(f(tau * direction))
        if vals.ndim == 1:
            return np.sum(w * vals) * direction
        return np.sum(w[:, None] * vals, axis=0) * direction

    prev = rule(edges)
    history = []
    for _ in range(max_refinements):
        edges = np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
        value = rule(edges)
        err = float(np.max(np.abs(np.asarray(value) - np.asarray(prev))))
        history.append(err)
        if err <= target_abs_err:
            return QuadratureResult(value, err, GL_ORDER * (edges.size - 1), True, history)
        prev = value
    return QuadratureResult(prev, history[-1], GL_ORDER * (edges.size - 1), False, history)


def time_average(f: Callable, window_start: float, window_len: float, samples: int = 2000,
                 vectorized: bool = False) -> float:
    """Trapezoid average of f over [window_start, window_start + window_len]."""
    if not window_len > 0:
        raise DomainError("time_average: window_len must be positive")
    if samples < 1000:
        raise DomainError("time_average: at least 1000 samples are required")
    t = np.linspace(window_start, window_start + window_len, samples)
    vals = np.asarray(f(t), dtype=float) if vectorized else np.array([f(tt) for tt in t], dtype=float)
    return float(np.trapezoid(vals, t) / window_len)
