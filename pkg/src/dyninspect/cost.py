"""Expected downtime and the inspection cost rate.

The downtime expectation over an interval of length tau is integrated by
parts into the integral of the failure probability ``1 - R(t)`` over
``[0, tau]``. The derivative form, integrating ``(tau - t) f(t)`` with a
finite-difference density, is kept as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DomainError, NumericalConsistencyError
from .numerics import DEFAULT_NUMERICS, NumericsConfig, composite_nodes, gauss_legendre
from .system import SystemModel, check_ages, failed_at_start, reliability_curve

NEGATIVE_DENSITY_TOL = 1e-8


@dataclass(frozen=True)
class CostParams:
    inspection_cost: float
    replacement_cost: float
    downtime_cost_rate: float

    def __post_init__(self):
        problems = []
        for name in ("inspection_cost", "replacement_cost", "downtime_cost_rate"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                problems.append((f"costs.{name}", f"must be a nonnegative finite number, got {value!r}"))
        if not problems and not any(
            getattr(self, n) > 0 for n in ("inspection_cost", "replacement_cost", "downtime_cost_rate")
        ):
            problems.append(("costs", "at least one cost must be positive"))
        if problems:
            raise ConfigError(problems)


def _check_tau(tau):
    if not (tau > 0 and math.isfinite(tau)):
        raise DomainError(f"tau must be positive and finite, got {tau!r}")


def expected_downtime(
    sys: SystemModel, tau: float, u: Sequence[float], numerics: NumericsConfig = DEFAULT_NUMERICS, backend=None
) -> float:
    """Expected time the system spends failed within ``[0, tau]``."""
    _check_tau(tau)
    if failed_at_start(sys, u):
        return float(tau)
    nodes, weights = composite_nodes(0.0, tau, numerics.downtime_order, numerics.downtime_subintervals)
    rel = reliability_curve(sys, nodes, u, numerics, backend)
    return float(min(max(np.dot(weights, 1.0 - rel), 0.0), tau))


def downtime_moments(
    sys: SystemModel, tau: float, u: Sequence[float], numerics: NumericsConfig = DEFAULT_NUMERICS, backend=None
) -> tuple[float, float]:
    """First and second moments of the downtime ``max(tau - T, 0)``.

    ``E[D^2]`` is the integral of ``2 (tau - t) (1 - R(t))`` over ``[0, tau]``,
    evaluated on the same composite rule as :func:`expected_downtime`.
    """
    _check_tau(tau)
    if failed_at_start(sys, u):
        return float(tau), float(tau) ** 2
    nodes, weights = composite_nodes(0.0, tau, numerics.downtime_order, numerics.downtime_subintervals)
    fail = 1.0 - reliability_curve(sys, nodes, u, numerics, backend)
    first = min(max(float(np.dot(weights, fail)), 0.0), tau)
    second = min(max(float(np.dot(weights, 2.0 * (tau - nodes) * fail)), 0.0), tau * tau)
    return first, second


def failure_time_density(
    sys: SystemModel, t, u: Sequence[float], numerics: NumericsConfig = DEFAULT_NUMERICS, backend=None
):
    """Density of the system failure time by central differences of ``R``.

    Accepts a scalar or an array of positive times. Small negative values from
    rounding are clamped to zero; anything below ``-1e-8`` raises
    :class:`NumericalConsistencyError`.
    """
    scalar = np.isscalar(t)
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(ts <= 0) or not np.all(np.isfinite(ts)):
        raise DomainError("failure_time_density needs finite positive times")
    h = np.maximum(numerics.derivative_rel_step * ts, 1e-6)
    lo = np.maximum(ts - h, 0.0)
    hi = ts + h
    rel = reliability_curve(sys, np.concatenate([lo, hi]), u, numerics, backend)
    dens = (rel[: ts.size] - rel[ts.size :]) / (hi - lo)
    worst = float(dens.min())
    if worst < -NEGATIVE_DENSITY_TOL:
        raise NumericalConsistencyError(f"negative failure-time density {worst:.3g}; reliability is not monotone")
    dens = np.maximum(dens, 0.0)
    return float(dens[0]) if scalar else dens


def expected_downtime_derivative_form(
    sys: SystemModel, tau: float, u: Sequence[float], numerics: NumericsConfig = DEFAULT_NUMERICS, backend=None
) -> float:
    """Cross-check route: integrate ``(tau - t) f(t)`` over ``[0, tau]``."""
    _check_tau(tau)
    if failed_at_start(sys, u):
        return float(tau)
    nodes, weights = composite_nodes(0.0, tau, numerics.downtime_order, numerics.downtime_subintervals)
    dens = failure_time_density(sys, nodes, u, numerics, backend)
    return float(np.dot(weights, (tau - nodes) * dens))


def cost_rate(
    sys: SystemModel,
    costs: CostParams,
    tau: float,
    u: Sequence[float],
    numerics: NumericsConfig = DEFAULT_NUMERICS,
    backend=None,
) -> float:
    """Expected cost per unit time of inspecting after ``tau``."""
    _check_tau(tau)
    rel_tau = float(reliability_curve(sys, np.array([tau]), u, numerics, backend)[0])
    downtime = expected_downtime(sys, tau, u, numerics, backend)
    return _rate(costs, tau, rel_tau, downtime)


def _rate(costs, tau, rel_tau, downtime):
    return (
        costs.inspection_cost + costs.replacement_cost * (1.0 - rel_tau) + costs.downtime_cost_rate * downtime
    ) / tau


def piecewise_downtime(
    sys: SystemModel, edges, u: Sequence[float], numerics: NumericsConfig = DEFAULT_NUMERICS, backend=None
) -> tuple[np.ndarray, np.ndarray]:
    """Integrals of ``1 - R`` over consecutive ``[edges[k], edges[k+1]]`` plus ``R`` at every edge.

    One Gauss-Legendre rule of ``numerics.downtime_order`` nodes per gap, all
    reliability values from a single kernel call.
    """
    edges = np.asarray(edges, dtype=np.float64)
    x, w = gauss_legendre(numerics.downtime_order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    rel = reliability_curve(sys, np.concatenate([nodes, edges]), u, numerics, backend)
    inner = (1.0 - rel[: nodes.size]).reshape(half.size, x.size)
    return half * (inner @ w), rel[nodes.size :]


def cost_rate_curve(
    sys: SystemModel,
    costs: CostParams,
    taus,
    u: Sequence[float],
    numerics: NumericsConfig = DEFAULT_NUMERICS,
    backend=None,
) -> np.ndarray:
    """Cost rate at every point of a strictly increasing ``taus`` grid.

    Expected downtime is accumulated gap by gap, which is far cheaper than a
    fresh composite rule per tau and at least as accurate on fine grids.
    """
    taus = np.asarray(taus, dtype=np.float64)
    if taus.ndim != 1 or taus.size == 0 or taus[0] <= 0 or np.any(np.diff(taus) <= 0):
        raise DomainError("taus must be a non-empty strictly increasing grid of positive times")
    check_ages(sys, u)
    if failed_at_start(sys, u):
        return _rate(costs, taus, 0.0, taus)
    pieces, rel = piecewise_downtime(sys, np.concatenate([[0.0], taus]), u, numerics, backend)
    downtime = np.minimum(np.maximum(np.cumsum(pieces), 0.0), taus)
    return _rate(costs, taus, rel[1:], downtime)
