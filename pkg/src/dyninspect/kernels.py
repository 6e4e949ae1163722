"""Elementary probability kernels: Poisson counts, normal and gamma CDFs, and
the m-fold convolution density of normal shock damages.

The underscore-prefixed scalar functions are compiled with numba when the
accelerated backend is active and are called from the reliability kernels.
The public wrappers validate their arguments and return Python floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._accel import jit
from .errors import DegenerateOrderError, DomainError

_EPS = 1e-16
_FPMIN = 1e-300
_MAX_ITER = 10_000
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ShockProcess:
    """Homogeneous Poisson shock arrivals shared by every component."""

    rate: float

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise DomainError(f"shock rate must be positive and finite, got {self.rate!r}")


@jit
def _poisson_pmf(rate, t, m):
    mean = rate * t
    if mean == 0.0:
        return 1.0 if m == 0 else 0.0
    return math.exp(m * math.log(mean) - mean - math.lgamma(m + 1.0))


@jit
def _truncation_order(rate, t, tail_tol):
    mean = rate * t
    if mean == 0.0:
        return 2
    target = 1.0 - tail_tol
    total = 0.0
    m = 0
    # the cap only guards against tail_tol below the attainable float resolution
    cap = int(mean + 40.0 * math.sqrt(mean) + 50.0)
    while m < cap:
        total += _poisson_pmf(rate, t, m)
        if total >= target:
            break
        m += 1
    return max(m, 2)


@jit
def _norm_cdf(z):
    return 0.5 * math.erfc(-z / _SQRT2)


@jit
def _norm_sf(z):
    return 0.5 * math.erfc(z / _SQRT2)


@jit
def _norm_pdf(z):
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


@jit
def _gammainc_lower(a, x, lgamma_a):
    """Regularized lower incomplete gamma P(a, x) with ``lgamma(a)`` precomputed.

    Series expansion below ``a + 1``, Lentz continued fraction for the upper
    tail above it.
    """
    if x <= 0.0:
        return 0.0
    log_prefactor = -x + a * math.log(x) - lgamma_a
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        total = term
        for _ in range(_MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                break
        value = total * math.exp(log_prefactor)
        return value if value < 1.0 else 1.0
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    value = 1.0 - math.exp(log_prefactor) * h
    return value if value > 0.0 else 0.0


@jit
def _mfold_pdf(m, mean, sd, y):
    s = math.sqrt(m) * sd
    return _norm_pdf((y - m * mean) / s) / s


def poisson_pmf(rate: float, t: float, m: int) -> float:
    """Probability of exactly ``m`` shocks in ``[0, t]``, evaluated in log space."""
    if not rate > 0:
        raise DomainError(f"rate must be positive, got {rate!r}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m!r}")
    return float(_poisson_pmf(float(rate), float(t), int(m)))


def poisson_truncation_order(rate: float, t: float, tail_tol: float) -> int:
    """Smallest ``M >= 2`` with ``sum_{m<=M} pmf(m) >= 1 - tail_tol``."""
    if not 0 < tail_tol < 1:
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")
    return int(_truncation_order(float(rate), float(max(t, 0.0)), float(tail_tol)))


def normal_cdf(x: float, mean: float = 0.0, sd: float = 1.0) -> float:
    if not sd > 0:
        raise DomainError(f"sd must be positive, got {sd!r}")
    return float(_norm_cdf((x - mean) / sd))


def normal_sf(x: float, mean: float = 0.0, sd: float = 1.0) -> float:
    """Upper tail ``1 - normal_cdf`` without cancellation."""
    if not sd > 0:
        raise DomainError(f"sd must be positive, got {sd!r}")
    return float(_norm_sf((x - mean) / sd))


def gamma_cdf(x: float, shape: float, scale: float) -> float:
    if not shape > 0:
        raise DomainError(f"shape must be positive, got {shape!r}")
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale!r}")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    return float(_gammainc_lower(float(shape), float(x) / scale, math.lgamma(shape)))


def mfold_damage_density(m: int, damage_mean: float, damage_sd: float, y: float) -> float:
    """Density of the sum of ``m`` i.i.d. Normal(damage_mean, damage_sd**2) damages.

    ``m == 0`` is a point mass at zero and is rejected; callers handle it.
    """
    if not damage_sd > 0:
        raise DomainError(f"damage_sd must be positive, got {damage_sd!r}")
    if m == 0:
        raise DegenerateOrderError("zero-fold convolution is a point mass at y = 0")
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m!r}")
    if math.isinf(y):
        return 0.0
    return float(_mfold_pdf(int(m), float(damage_mean), float(damage_sd), float(y)))
