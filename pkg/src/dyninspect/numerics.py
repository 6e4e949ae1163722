from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError

GAMMA_PARAMETERIZATIONS = ("scale", "rate")


@dataclass(frozen=True)
class NumericsConfig:
    """Truncation, quadrature and differencing controls.

    ``gamma_parameterization`` decides how a component's ``gamma_scale`` is
    read: ``"scale"`` uses it as the gamma scale, ``"rate"`` uses its
    reciprocal.
    """

    poisson_tail_tol: float = 1e-10
    quadrature_order: int = 64
    downtime_order: int = 32
    downtime_subintervals: int = 8
    derivative_rel_step: float = 1e-4
    gamma_parameterization: str = "scale"

    def __post_init__(self):
        problems = []
        if not 0 < self.poisson_tail_tol < 1:
            problems.append(("numerics.poisson_tail_tol", "must lie in (0, 1)"))
        if self.quadrature_order < 8:
            problems.append(("numerics.quadrature_order", "must be >= 8"))
        if self.downtime_order < 1:
            problems.append(("numerics.downtime_order", "must be positive"))
        if self.downtime_subintervals < 1:
            problems.append(("numerics.downtime_subintervals", "must be positive"))
        if not self.derivative_rel_step > 0:
            problems.append(("numerics.derivative_rel_step", "must be positive"))
        if self.gamma_parameterization not in GAMMA_PARAMETERIZATIONS:
            problems.append(
                ("numerics.gamma_parameterization", f"must be one of {GAMMA_PARAMETERIZATIONS}")
            )
        if problems:
            raise ConfigError(problems)


DEFAULT_NUMERICS = NumericsConfig()


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``[-1, 1]``; read-only arrays."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def composite_nodes(a: float, b: float, order: int, pieces: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights for ``[a, b]`` split into equal pieces."""
    x, w = gauss_legendre(order)
    edges = np.linspace(a, b, pieces + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights
