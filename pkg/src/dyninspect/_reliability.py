"""Hot kernels: system reliability over a vector of times.

Two interchangeable implementations share one signature:

* ``reliability_grid_numba`` loops over times, shock counts, components and
  quadrature nodes in compiled code, using the series/continued-fraction
  incomplete gamma from :mod:`dyninspect.kernels`.
* ``reliability_grid_numpy`` broadcasts the same sums over arrays and leans on
  ``scipy.special.gammainc``.

Array arguments (all float64, one entry per component): ``ages``, ``H``
(soft thresholds), ``shape_rate``, ``scale`` (effective gamma scale),
``p_hard`` (single-shock hard survival), ``dmean``/``dsd`` (shock damage).
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from ._accel import jit, resolve_backend
from .kernels import _gammainc_lower, _norm_pdf, _poisson_pmf, _truncation_order

_WINDOW_SDS = 8.0
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@jit
def soft_survival_kernel(remaining, shape, scale, lgamma_shape, m, dmean, dsd, gx, gw):
    """P(X + S_m < remaining) for gamma X and the m-fold damage sum S_m."""
    if remaining <= 0.0:
        return 0.0
    if m == 0:
        return _gammainc_lower(shape, remaining / scale, lgamma_shape)
    s = math.sqrt(m) * dsd
    mu = m * dmean
    lo = max(0.0, mu - _WINDOW_SDS * s)
    hi = min(remaining, mu + _WINDOW_SDS * s)
    if lo >= hi:
        return 0.0
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    acc = 0.0
    for j in range(gx.size):
        y = mid + half * gx[j]
        acc += gw[j] * _gammainc_lower(shape, (remaining - y) / scale, lgamma_shape) * _norm_pdf((y - mu) / s)
    return half * acc / s


@jit
def reliability_at(t, ages, H, shape_rate, scale, p_hard, dmean, dsd, rate, parallel, tail_tol, gx, gw):
    n = H.size
    if t <= 0.0:
        alive = 0
        for i in range(n):
            if ages[i] < H[i]:
                alive += 1
        if parallel:
            return 1.0 if alive > 0 else 0.0
        return 1.0 if alive == n else 0.0
    if not parallel:
        for i in range(n):
            if ages[i] >= H[i]:
                return 0.0
    M = _truncation_order(rate, t, tail_tol)
    lgammas = np.empty(n)
    for i in range(n):
        lgammas[i] = math.lgamma(shape_rate[i] * t)
    total = 0.0
    mass = 0.0
    last = 0.0
    for m in range(M + 1):
        pm = _poisson_pmf(rate, t, m)
        mass += pm
        prod = 1.0
        for i in range(n):
            s = p_hard[i] ** m * soft_survival_kernel(
                H[i] - ages[i], shape_rate[i] * t, scale[i], lgammas[i], m, dmean[i], dsd[i], gx, gw
            )
            if parallel:
                prod *= 1.0 - s
            else:
                prod *= s
            if prod == 0.0:
                break
        # parallel: sum pmf * (1 - prod) equals 1 - sum pmf * prod over the full count range
        last = 1.0 - prod if parallel else prod
        total += pm * last
    # the untruncated tail keeps the survival of the last order, so R stays continuous when M steps up
    total += max(1.0 - mass, 0.0) * last
    return min(max(total, 0.0), 1.0)


@jit
def reliability_grid_numba(ts, ages, H, shape_rate, scale, p_hard, dmean, dsd, rate, parallel, tail_tol, gx, gw):
    out = np.empty(ts.size)
    for k in range(ts.size):
        out[k] = reliability_at(
            ts[k], ages, H, shape_rate, scale, p_hard, dmean, dsd, rate, parallel, tail_tol, gx, gw
        )
    return out


def _numpy_chunk(t, ages, H, shape_rate, scale, p_hard, dmean, dsd, rate, parallel, tail_tol, gx, gw):
    out = np.empty(t.size)
    alive = ages < H
    start_ok = bool(alive.any()) if parallel else bool(alive.all())
    pos = t > 0
    out[~pos] = 1.0 if start_ok else 0.0
    if not pos.any():
        return out
    if not parallel and not start_ok:
        out[pos] = 0.0
        return out
    tp = t[pos]
    mean = rate * tp
    mmax = float(mean.max())
    cap = int(mmax + 40.0 * math.sqrt(mmax) + 50.0)
    ms = np.arange(cap + 1)
    pmf = np.exp(ms[None, :] * np.log(mean)[:, None] - mean[:, None] - special.gammaln(ms + 1.0)[None, :])
    reached = np.cumsum(pmf, axis=1) >= 1.0 - tail_tol
    order = np.where(reached.any(axis=1), reached.argmax(axis=1), cap)
    order = np.maximum(order, 2)
    top = int(order.max())
    ms = ms[: top + 1]
    pmf = np.where(ms[None, :] <= order[:, None], pmf[:, : top + 1], 0.0)

    remaining = H - ages
    shape = shape_rate[None, :] * tp[:, None]
    soft = np.zeros((tp.size, H.size, top + 1))
    soft[:, :, 0] = np.where(
        remaining > 0, special.gammainc(shape, np.maximum(remaining, 0.0)[None, :] / scale[None, :]), 0.0
    )
    for m in range(1, top + 1):
        s = math.sqrt(m) * dsd
        mu = m * dmean
        lo = np.maximum(0.0, mu - _WINDOW_SDS * s)
        hi = np.minimum(remaining, mu + _WINDOW_SDS * s)
        valid = (lo < hi) & (remaining > 0)
        half = 0.5 * (hi - lo)
        y = 0.5 * (hi + lo)[:, None] + half[:, None] * gx[None, :]
        dens = _INV_SQRT_2PI * np.exp(-0.5 * ((y - mu[:, None]) / s[:, None]) ** 2) / s[:, None]
        arg = np.maximum(remaining[:, None] - y, 0.0) / scale[:, None]
        cdf = special.gammainc(shape[:, :, None], arg[None, :, :])
        integral = half[None, :] * np.sum(gw * cdf * dens[None, :, :], axis=2)
        soft[:, :, m] = np.where(valid[None, :], integral, 0.0)

    surv = p_hard[None, :, None] ** ms[None, None, :] * soft
    if parallel:
        terms = 1.0 - np.prod(1.0 - surv, axis=1)
    else:
        terms = np.prod(surv, axis=1)
    rel = np.sum(terms * pmf, axis=1)
    tail = np.maximum(1.0 - np.sum(pmf, axis=1), 0.0)
    rel += tail * terms[np.arange(tp.size), order]
    out[pos] = np.clip(rel, 0.0, 1.0)
    return out


def reliability_grid_numpy(
    ts, ages, H, shape_rate, scale, p_hard, dmean, dsd, rate, parallel, tail_tol, gx, gw, chunk=512
):
    out = np.empty(ts.size)
    for start in range(0, ts.size, chunk):
        sl = slice(start, start + chunk)
        out[sl] = _numpy_chunk(
            ts[sl], ages, H, shape_rate, scale, p_hard, dmean, dsd, rate, parallel, tail_tol, gx, gw
        )
    return out


def reliability_grid(ts, ages, arrays, rate, parallel, tail_tol, gx, gw, backend=None):
    """Dispatch to the selected backend. ``arrays`` is ``(H, shape_rate, scale, p_hard, dmean, dsd)``."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    ages = np.ascontiguousarray(ages, dtype=np.float64)
    args = (ts, ages, *arrays, float(rate), bool(parallel), float(tail_tol), gx, gw)
    if resolve_backend(backend) == "numba":
        return reliability_grid_numba(*args)
    return reliability_grid_numpy(*args)
