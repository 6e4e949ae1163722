"""Series and parallel system reliability under one shared shock stream.

Every component sees the same shock count, so system reliability is a single
sum over that count of per-count component terms, not a product of component
reliabilities.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._reliability import reliability_grid
from .component import ComponentModel, component_arrays
from .errors import ConfigError, DomainError, TopologyMismatchError
from .kernels import ShockProcess
from .numerics import DEFAULT_NUMERICS, NumericsConfig, gauss_legendre


class Topology(str, enum.Enum):
    SERIES = "series"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class SystemModel:
    topology: Topology
    components: tuple[ComponentModel, ...]
    shock: ShockProcess

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ConfigError([("components", "at least one component is required")])

    @property
    def n(self) -> int:
        return len(self.components)

    def with_topology(self, topology) -> "SystemModel":
        return SystemModel(Topology(topology), self.components, self.shock)


def check_ages(sys: SystemModel, u: Sequence[float]) -> np.ndarray:
    """Validate a state vector (initial degradation per component) and return it as an array."""
    ages = np.asarray(u, dtype=np.float64).reshape(-1)
    if ages.size != sys.n:
        raise DomainError(f"expected {sys.n} ages, got {ages.size}")
    if not np.all(np.isfinite(ages)) or np.any(ages < 0):
        raise DomainError(f"ages must be finite and nonnegative, got {ages.tolist()}")
    return ages


def failed_at_start(sys: SystemModel, u: Sequence[float]) -> bool:
    ages = check_ages(sys, u)
    down = [a >= c.soft_threshold for a, c in zip(ages, sys.components)]
    return all(down) if sys.topology is Topology.PARALLEL else any(down)


def reliability_curve(
    sys: SystemModel,
    ts,
    u: Sequence[float],
    numerics: NumericsConfig = DEFAULT_NUMERICS,
    backend: str | None = None,
) -> np.ndarray:
    """System reliability at each time in ``ts`` (nonnegative)."""
    ts = np.asarray(ts, dtype=np.float64)
    if np.any(ts < 0) or not np.all(np.isfinite(ts)):
        raise DomainError("times must be finite and nonnegative")
    ages = check_ages(sys, u)
    gx, gw = gauss_legendre(numerics.quadrature_order)
    flat = reliability_grid(
        ts.reshape(-1),
        ages,
        component_arrays(sys.components, numerics),
        sys.shock.rate,
        sys.topology is Topology.PARALLEL,
        numerics.poisson_tail_tol,
        gx,
        gw,
        backend=backend,
    )
    return flat.reshape(ts.shape)


def _scalar(sys, t, u, numerics, backend):
    if not (t >= 0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and nonnegative, got {t!r}")
    return float(reliability_curve(sys, np.array([t]), u, numerics, backend)[0])


def series_reliability(sys: SystemModel, t: float, u, numerics: NumericsConfig = DEFAULT_NUMERICS, backend=None) -> float:
    if sys.topology is not Topology.SERIES:
        raise TopologyMismatchError(f"series_reliability called on a {sys.topology.value} system")
    return _scalar(sys, t, u, numerics, backend)


def parallel_reliability(sys: SystemModel, t: float, u, numerics: NumericsConfig = DEFAULT_NUMERICS, backend=None) -> float:
    if sys.topology is not Topology.PARALLEL:
        raise TopologyMismatchError(f"parallel_reliability called on a {sys.topology.value} system")
    return _scalar(sys, t, u, numerics, backend)


def system_reliability(sys: SystemModel, t: float, u, numerics: NumericsConfig = DEFAULT_NUMERICS, backend=None) -> float:
    if sys.topology is Topology.SERIES:
        return series_reliability(sys, t, u, numerics, backend)
    return parallel_reliability(sys, t, u, numerics, backend)
