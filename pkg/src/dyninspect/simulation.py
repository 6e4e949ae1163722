"""Monte Carlo oracle for the degradation-plus-shock system.

Each path draws one Poisson shock sequence shared by all components. Between
events (shock instants and the requested times) component degradation
advances by exact gamma increments. A continuous threshold crossing inside an
interval is located by bisection on the gamma bridge: conditional on both
ends, the midpoint value is a Beta(a, a) split of the increment, so the
crossing time is exact up to ``bisection_tol``. Crossings caused by a shock
jump and hard failures happen at the shock instant itself.

Random streams: block ``b`` of ``block_size`` paths draws from
``Generator(BitGen(SeedSequence(seed, spawn_key=(b,))))``, so estimates do
not depend on how blocks are scheduled across threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .numerics import DEFAULT_NUMERICS, NumericsConfig
from .system import SystemModel, Topology, check_ages, failed_at_start

RNG_ALGORITHMS = {"PCG64": np.random.PCG64, "Philox": np.random.Philox}


@dataclass(frozen=True)
class SimulationPlan:
    n_paths: int
    time_grid: tuple[float, ...]
    seed: int
    rng_algorithm: str = "PCG64"
    block_size: int = 10_000
    bisection_tol: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "time_grid", tuple(float(t) for t in self.time_grid))
        if int(self.n_paths) < 1:
            raise DomainError("n_paths must be >= 1")
        grid = np.asarray(self.time_grid)
        if grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0) or not np.all(np.isfinite(grid)):
            raise DomainError("time_grid must be non-empty, strictly increasing and positive")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.rng_algorithm not in RNG_ALGORITHMS:
            raise DomainError(f"rng_algorithm must be one of {sorted(RNG_ALGORITHMS)}")
        if self.block_size < 1 or not self.bisection_tol > 0:
            raise DomainError("block_size and bisection_tol must be positive")


@dataclass(frozen=True)
class SimulationEstimate:
    """``reliability_at`` rows are ``(t, estimate, se)``; ``expected_downtime`` rows ``(tau, estimate, se)``."""

    n_paths: int
    reliability_at: tuple[tuple[float, float, float], ...] = ()
    expected_downtime: tuple[tuple[float, float, float], ...] = field(default=())


def _bisect_crossing(rng, left, right, x_left, x_right, level, shape_rate, tol):
    width = float(np.max(right - left)) if left.size else 0.0
    steps = max(0, math.ceil(math.log2(width / tol))) if width > tol else 0
    for _ in range(steps):
        mid = 0.5 * (left + right)
        half_shape = np.maximum(shape_rate * 0.5 * (right - left), 1e-300)
        split = rng.beta(half_shape, half_shape)
        x_mid = x_left + (x_right - x_left) * split
        up = x_mid >= level
        right = np.where(up, mid, right)
        x_right = np.where(up, x_mid, x_right)
        left = np.where(up, left, mid)
        x_left = np.where(up, x_left, x_mid)
    return 0.5 * (left + right)


def _component_failure_times(rng, comp, scale, age, times, dt, real_shock, magnitude, damage, tol):
    n_paths, n_events = times.shape
    if age >= comp.soft_threshold:
        return np.zeros(n_paths)
    x = np.cumsum(rng.gamma(comp.gamma_shape_rate * dt, scale), axis=1)
    damage = np.where(real_shock, damage, 0.0)
    s_post = np.cumsum(damage, axis=1)
    s_pre = s_post - damage
    pre = age + x + s_pre
    post = age + x + s_post
    fail = np.full(n_paths, np.inf)

    hard = real_shock & (magnitude >= comp.hard_threshold)
    has_hard = hard.any(axis=1)
    k_hard = hard.argmax(axis=1)
    fail[has_hard] = times[has_hard, k_hard[has_hard]]

    crossed = (pre >= comp.soft_threshold) | (post >= comp.soft_threshold)
    has_soft = crossed.any(axis=1)
    rows = np.flatnonzero(has_soft)
    k = crossed.argmax(axis=1)[rows]
    t_soft = times[rows, k].copy()
    continuous = pre[rows, k] >= comp.soft_threshold
    if continuous.any():
        r, kc = rows[continuous], k[continuous]
        prev = kc - 1
        has_prev = prev >= 0
        left = np.where(has_prev, times[r, np.maximum(prev, 0)], 0.0)
        x_left = np.where(has_prev, x[r, np.maximum(prev, 0)], 0.0)
        level = comp.soft_threshold - age - s_pre[r, kc]
        t_soft[continuous] = _bisect_crossing(
            rng, left, times[r, kc], x_left, x[r, kc], level, comp.gamma_shape_rate, tol
        )
    fail[rows] = np.minimum(fail[rows], t_soft)
    return fail


def _simulate_block(sys, ages, scales, base_times, n_paths, seed_seq, bitgen, tol):
    rng = np.random.Generator(bitgen(seed_seq))
    horizon = base_times[-1]
    counts = rng.poisson(sys.shock.rate * horizon, n_paths)
    k_max = int(counts.max()) if n_paths else 0
    real = np.arange(k_max)[None, :] < counts[:, None]
    shock_times = np.sort(np.where(real, rng.uniform(0.0, horizon, (n_paths, k_max)), np.inf), axis=1)

    n_base = base_times.size
    all_times = np.concatenate([np.broadcast_to(base_times, (n_paths, n_base)), shock_times], axis=1)
    order = np.argsort(all_times, axis=1, kind="stable")
    times = np.take_along_axis(all_times, order, axis=1)
    is_shock = order >= n_base
    real_shock = np.take_along_axis(np.concatenate([np.zeros((n_paths, n_base), bool), real], axis=1), order, axis=1)
    finite_times = np.where(np.isfinite(times), times, horizon)
    dt = np.diff(finite_times, axis=1, prepend=0.0)

    failures = []
    for comp, scale, age in zip(sys.components, scales, ages):
        w = rng.normal(comp.magnitude_mean, comp.magnitude_sd, (n_paths, k_max))
        y = rng.normal(comp.damage_mean, comp.damage_sd, (n_paths, k_max))
        pad = np.zeros((n_paths, n_base))
        magnitude = np.where(is_shock, np.take_along_axis(np.concatenate([pad, w], axis=1), order, axis=1), -np.inf)
        damage = np.take_along_axis(np.concatenate([pad, y], axis=1), order, axis=1)
        failures.append(
            _component_failure_times(rng, comp, scale, age, finite_times, dt, real_shock, magnitude, damage, tol)
        )
    failures = np.vstack(failures)
    if sys.topology is Topology.SERIES:
        return failures.min(axis=0)
    return failures.max(axis=0)


def simulate_failure_times(
    sys: SystemModel,
    u: Sequence[float],
    horizon_times: Sequence[float],
    plan: SimulationPlan,
    numerics: NumericsConfig = DEFAULT_NUMERICS,
    threads: int = 1,
) -> list[np.ndarray]:
    """System failure time per path (``inf`` beyond the horizon), one array per block."""
    ages = check_ages(sys, u)
    base = np.unique(np.asarray(horizon_times, dtype=np.float64))
    scales = [c.gamma_scale_for(numerics) for c in sys.components]
    bitgen = RNG_ALGORITHMS[plan.rng_algorithm]
    sizes = [plan.block_size] * (plan.n_paths // plan.block_size)
    if plan.n_paths % plan.block_size:
        sizes.append(plan.n_paths % plan.block_size)

    def run(b):
        seq = np.random.SeedSequence(int(plan.seed), spawn_key=(b,))
        return _simulate_block(sys, ages, scales, base, sizes[b], seq, bitgen, plan.bisection_tol)

    if threads <= 1:
        return [run(b) for b in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, range(len(sizes))))


def simulate(
    sys: SystemModel,
    u: Sequence[float],
    plan: SimulationPlan,
    taus: Sequence[float] = (),
    numerics: NumericsConfig = DEFAULT_NUMERICS,
    threads: int = 1,
) -> SimulationEstimate:
    """Reliability on ``plan.time_grid`` and expected downtime for each ``tau``."""
    taus = [float(t) for t in taus]
    if any(not (t > 0 and math.isfinite(t)) for t in taus):
        raise DomainError("tau must be positive and finite")
    n = plan.n_paths
    grid = plan.time_grid
    if failed_at_start(sys, u):
        check_ages(sys, u)
        return SimulationEstimate(n, tuple((t, 0.0, 0.0) for t in grid), tuple((t, t, 0.0) for t in taus))

    blocks = simulate_failure_times(sys, u, list(grid) + taus, plan, numerics, threads)
    rel_rows = []
    for t in grid:
        alive = sum(int(np.count_nonzero(b > t)) for b in blocks)
        p = alive / n
        rel_rows.append((t, p, math.sqrt(p * (1.0 - p) / n)))
    down_rows = []
    for tau in taus:
        per_block = [np.maximum(tau - b, 0.0) for b in blocks]
        mean = math.fsum(float(np.sum(d)) for d in per_block) / n
        sq = math.fsum(float(np.sum((d - mean) ** 2)) for d in per_block)
        se = math.sqrt(sq / (n - 1) / n) if n > 1 else 0.0
        down_rows.append((tau, mean, se))
    return SimulationEstimate(n, tuple(rel_rows), tuple(down_rows))


def z_score(estimate: float, se: float, analytic: float, floor: float = 0.0) -> float:
    """Standardized gap between a Monte Carlo estimate and an analytic value.

    An estimate whose paths all agree has a zero sample standard error, so the
    error used is ``max(se, floor)``. :func:`reliability_se_floor` and
    :func:`downtime_se_floor` give the standard errors implied by the analytic
    model.
    """
    se = max(se, floor)
    gap = estimate - analytic
    if se > 0:
        return gap / se
    return 0.0 if gap == 0 else math.copysign(math.inf, gap)


def reliability_se_floor(analytic: float, n_paths: int) -> float:
    """Binomial standard error at the analytic probability."""
    a = min(max(analytic, 0.0), 1.0)
    return math.sqrt(a * (1.0 - a) / n_paths)


def downtime_se_floor(mean: float, second_moment: float, n_paths: int) -> float:
    """Standard error of a downtime average when the analytic moments are exact."""
    return math.sqrt(max(second_moment - mean * mean, 0.0) / n_paths)


def simulate_reliability(sys, u, plan, numerics: NumericsConfig = DEFAULT_NUMERICS, threads: int = 1):
    return simulate(sys, u, plan, (), numerics, threads)


def simulate_expected_downtime(sys, u, tau, plan, numerics: NumericsConfig = DEFAULT_NUMERICS, threads: int = 1):
    return simulate(sys, u, plan, (tau,), numerics, threads)
