"""Single-component survival under degradation plus dependent shocks."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ._reliability import soft_survival_kernel
from .errors import ConfigError, DomainError
from .kernels import ShockProcess, _norm_cdf, _norm_sf, poisson_pmf, poisson_truncation_order
from .numerics import DEFAULT_NUMERICS, NumericsConfig, gauss_legendre

# Damages are integrated from zero, so the negative tail of a single damage must be negligible.
MAX_NEGATIVE_DAMAGE_PROB = 1e-3


@dataclass(frozen=True)
class ComponentModel:
    """Per-component thresholds, gamma degradation and shock parameters.

    Attributes:
        soft_threshold: degradation level at which the component soft-fails.
        hard_threshold: shock magnitude at or above which it hard-fails.
        gamma_shape_rate: gamma shape accrued per unit time.
        gamma_scale: gamma scale (or rate, see ``NumericsConfig``).
        damage_mean, damage_sd: normal shock damage added to degradation.
        magnitude_mean, magnitude_sd: normal shock magnitude.
    """

    soft_threshold: float
    hard_threshold: float
    gamma_shape_rate: float
    gamma_scale: float
    damage_mean: float
    damage_sd: float
    magnitude_mean: float
    magnitude_sd: float

    def __post_init__(self):
        problems = validate_component_fields(asdict(self))
        if problems:
            raise ConfigError(problems)

    def gamma_scale_for(self, numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
        if numerics.gamma_parameterization == "rate":
            return 1.0 / self.gamma_scale
        return self.gamma_scale


def validate_component_fields(fields: dict, prefix: str = "") -> list[tuple[str, str]]:
    problems = []
    for name in ("soft_threshold", "hard_threshold", "gamma_shape_rate", "gamma_scale", "damage_sd", "magnitude_sd"):
        value = fields.get(name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            problems.append((prefix + name, f"must be a positive finite number, got {value!r}"))
    for name in ("damage_mean", "magnitude_mean"):
        value = fields.get(name)
        if not (isinstance(value, (int, float)) and math.isfinite(value)):
            problems.append((prefix + name, f"must be a finite number, got {value!r}"))
    if not problems:
        neg = _norm_cdf(-fields["damage_mean"] / fields["damage_sd"])
        if neg >= MAX_NEGATIVE_DAMAGE_PROB:
            problems.append(
                (prefix + "damage_mean", f"P(damage < 0) = {neg:.3g} must be below {MAX_NEGATIVE_DAMAGE_PROB}")
            )
    return problems


def hard_survival_prob(c: ComponentModel) -> float:
    """Probability that one shock's magnitude stays below the hard threshold."""
    return float(_norm_cdf((c.hard_threshold - c.magnitude_mean) / c.magnitude_sd))


def hard_failure_prob(c: ComponentModel) -> float:
    """``1 - hard_survival_prob(c)`` computed from the upper tail directly."""
    return float(_norm_sf((c.hard_threshold - c.magnitude_mean) / c.magnitude_sd))


def soft_survival_given_m_shocks(
    c: ComponentModel,
    t: float,
    u: float,
    m: int,
    numerics: NumericsConfig = DEFAULT_NUMERICS,
) -> float:
    """P(X(t) + damage sum of m shocks + u < soft threshold)."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m!r}")
    if u < 0:
        raise DomainError(f"initial degradation must be nonnegative, got {u!r}")
    shape = c.gamma_shape_rate * t
    gx, gw = gauss_legendre(numerics.quadrature_order)
    return float(
        soft_survival_kernel(
            float(c.soft_threshold - u),
            float(shape),
            float(c.gamma_scale_for(numerics)),
            math.lgamma(shape),
            int(m),
            float(c.damage_mean),
            float(c.damage_sd),
            gx,
            gw,
        )
    )


def component_reliability(
    c: ComponentModel,
    shock: ShockProcess,
    t: float,
    u: float,
    numerics: NumericsConfig = DEFAULT_NUMERICS,
) -> float:
    """Survival probability over ``[0, t]`` starting from initial degradation ``u``.

    At ``t == 0`` returns 1 for a working component and 0 for one already at
    or past its soft threshold.
    """
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if u < 0:
        raise DomainError(f"initial degradation must be nonnegative, got {u!r}")
    if u >= c.soft_threshold:
        return 0.0
    if t == 0:
        return 1.0
    p_hard = hard_survival_prob(c)
    order = poisson_truncation_order(shock.rate, t, numerics.poisson_tail_tol)
    total = mass = term = 0.0
    for m in range(order + 1):
        pm = poisson_pmf(shock.rate, t, m)
        term = p_hard**m * soft_survival_given_m_shocks(c, t, u, m, numerics)
        total += term * pm
        mass += pm
    # shock counts beyond the truncation order keep the last order's survival
    total += max(1.0 - mass, 0.0) * term
    return min(max(total, 0.0), 1.0)


def component_arrays(components, numerics: NumericsConfig = DEFAULT_NUMERICS) -> tuple[np.ndarray, ...]:
    """Pack components into the ``(H, shape_rate, scale, p_hard, dmean, dsd)`` kernel arrays."""
    return (
        np.array([c.soft_threshold for c in components], dtype=np.float64),
        np.array([c.gamma_shape_rate for c in components], dtype=np.float64),
        np.array([c.gamma_scale_for(numerics) for c in components], dtype=np.float64),
        np.array([hard_survival_prob(c) for c in components], dtype=np.float64),
        np.array([c.damage_mean for c in components], dtype=np.float64),
        np.array([c.damage_sd for c in components], dtype=np.float64),
    )
