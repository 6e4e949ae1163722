"""Next-inspection-interval optimization and scenario sweeps."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cost import CostParams, cost_rate_curve, piecewise_downtime
from .errors import ConfigError, DyninspectError
from .numerics import DEFAULT_NUMERICS, NumericsConfig
from .system import SystemModel, Topology, check_ages, failed_at_start

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    tau_min: float = 0.01
    tau_max: float = 20.0
    coarse_grid_points: int = 400
    refine_tol: float = 1e-4

    def __post_init__(self):
        problems = []
        if not (self.tau_min > 0 and self.tau_min < self.tau_max and math.isfinite(self.tau_max)):
            problems.append(("optimizer.tau_min", "need 0 < tau_min < tau_max < inf"))
        if self.coarse_grid_points < 10:
            problems.append(("optimizer.coarse_grid_points", "must be >= 10"))
        if not self.refine_tol > 0:
            problems.append(("optimizer.refine_tol", "must be positive"))
        if problems:
            raise ConfigError(problems)

    def grid(self) -> np.ndarray:
        return np.geomspace(self.tau_min, self.tau_max, self.coarse_grid_points)


DEFAULT_OPTIMIZER = OptimizerConfig()


@dataclass(frozen=True)
class ScenarioResult:
    """Outcome of one optimization.

    ``boundary`` marks a minimizer within ``refine_tol`` of either search
    bound. ``immediate_action`` marks a system already failed at the start of
    the interval, for which ``tau_star`` is pinned to ``tau_min``.
    """

    ages: tuple[float, ...]
    tau_star: float
    cost_rate_at_star: float
    evaluations: int
    boundary: bool = False
    immediate_action: bool = False
    error: str | None = None


def golden_section(f, a: float, b: float, tol: float):
    """Minimize ``f`` on ``[a, b]`` until the bracket is narrower than ``tol``.

    Returns every ``(x, f(x))`` pair evaluated, in evaluation order.
    """
    seen = []
    if b - a < tol:
        return seen
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    seen += [(c, fc), (d, fd)]
    while b - a >= tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            seen.append((c, fc))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            seen.append((d, fd))
    return seen


def optimal_interval(
    sys: SystemModel,
    costs: CostParams,
    u: Sequence[float],
    cfg: OptimizerConfig = DEFAULT_OPTIMIZER,
    numerics: NumericsConfig = DEFAULT_NUMERICS,
    backend=None,
) -> ScenarioResult:
    """Minimize the cost rate over ``[tau_min, tau_max]`` for the state ``u``.

    Log-spaced coarse scan, then golden-section search on the grid cells
    either side of the best grid point. The best point evaluated anywhere is
    returned, so the result never exceeds a coarse-grid value.
    """
    ages = tuple(float(a) for a in check_ages(sys, u))
    if failed_at_start(sys, ages):
        tau = cfg.tau_min
        cr = (costs.inspection_cost + costs.replacement_cost + costs.downtime_cost_rate * tau) / tau
        return ScenarioResult(ages, tau, cr, 0, boundary=False, immediate_action=True)

    grid = cfg.grid()
    edges = np.concatenate([[0.0], grid])
    pieces, rel = piecewise_downtime(sys, edges, ages, numerics, backend)
    downtime = np.minimum(np.cumsum(pieces), grid)
    values = (
        costs.inspection_cost + costs.replacement_cost * (1.0 - rel[1:]) + costs.downtime_cost_rate * downtime
    ) / grid
    k = int(np.argmin(values))
    lo_idx = max(k - 1, 0)
    lo, hi = grid[lo_idx], grid[min(k + 1, grid.size - 1)]
    base = downtime[lo_idx]

    def objective(tau):
        piece, r = piecewise_downtime(sys, [lo, tau], ages, numerics, backend)
        dt = min(base + piece[0], tau)
        return (costs.inspection_cost + costs.replacement_cost * (1.0 - r[1]) + costs.downtime_cost_rate * dt) / tau

    refined = golden_section(objective, lo, hi, cfg.refine_tol)
    best_tau, best_val = float(grid[k]), float(values[k])
    for tau, val in refined:
        if val < best_val:
            best_tau, best_val = float(tau), float(val)
    boundary = best_tau - cfg.tau_min < cfg.refine_tol or cfg.tau_max - best_tau < cfg.refine_tol
    return ScenarioResult(ages, best_tau, best_val, grid.size + len(refined), boundary=boundary)


def scenario_sweep(
    sys: SystemModel,
    costs: CostParams,
    scenarios: Sequence[Sequence[float]],
    cfg: OptimizerConfig = DEFAULT_OPTIMIZER,
    numerics: NumericsConfig = DEFAULT_NUMERICS,
    threads: int = 1,
    backend=None,
) -> list[ScenarioResult]:
    """Optimize every scenario; failures are recorded in ``ScenarioResult.error``."""
    if len(scenarios) == 0:
        raise ValueError("scenario list is empty")

    def run(u):
        try:
            return optimal_interval(sys, costs, u, cfg, numerics, backend)
        except (DyninspectError, ValueError, ArithmeticError) as exc:
            return ScenarioResult(tuple(u), math.nan, math.nan, 0, error=str(exc))

    if threads <= 1:
        return [run(u) for u in scenarios]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, scenarios))


def cost_curves(
    sys: SystemModel,
    costs: CostParams,
    scenarios: Sequence[Sequence[float]],
    taus,
    numerics: NumericsConfig = DEFAULT_NUMERICS,
    backend=None,
) -> np.ndarray:
    """Cost rate versus tau for each scenario, shape ``(len(scenarios), len(taus))``."""
    return np.vstack([cost_rate_curve(sys, costs, taus, u, numerics, backend) for u in scenarios])


def surface_triples(results: Sequence[ScenarioResult]) -> list[tuple[float, float, float]]:
    """``(u1, u2, tau_star)`` points for a two-component age surface."""
    return [(r.ages[0], r.ages[1], r.tau_star) for r in results if len(r.ages) >= 2]
