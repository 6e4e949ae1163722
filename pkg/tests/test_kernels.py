import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special, stats

from dyninspect import (
    DegenerateOrderError,
    DomainError,
    ShockProcess,
    gamma_cdf,
    mfold_damage_density,
    normal_cdf,
    normal_sf,
    poisson_pmf,
    poisson_truncation_order,
)

# mpmath at 50 digits
GAMMA_REFERENCE = [
    (0.5, 0.1, 0.34527915398142297956),
    (3.0, 2.5, 0.45618688411667048200),
    (9.9, 20.0, 0.99540039499685139037),
    (60.0, 55.0, 0.26730090756955746793),
    (60.0, 70.0, 0.89760285056951686860),
    (1e-3, 1e-2, 0.99596940303351315577),
    (150.0, 140.0, 0.20954362391860706635),
    (0.02, 5.0, 0.99997594294088508625),
]


class TestPoisson:
    def test_no_time_means_no_shocks(self):
        assert poisson_pmf(2.5e-3, 0.0, 0) == 1.0
        assert poisson_pmf(2.5e-3, 0.0, 3) == 0.0

    def test_unit_rate(self):
        assert poisson_pmf(1.0, 1.0, 1) == pytest.approx(0.36787944117144232, abs=1e-15)

    def test_example_horizon(self):
        assert poisson_pmf(2.5e-3, 3.3, 0) == pytest.approx(0.99178393785676545, abs=1e-15)

    def test_large_counts_do_not_overflow(self):
        value = poisson_pmf(300.0, 1.0, 300)
        assert value == pytest.approx(stats.poisson.pmf(300, 300.0), rel=1e-10)

    @pytest.mark.parametrize("rate,t", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
    def test_domain(self, rate, t):
        with pytest.raises(DomainError):
            poisson_pmf(rate, t, 0)

    def test_shock_process_rejects_nonpositive_rate(self):
        with pytest.raises(DomainError):
            ShockProcess(0.0)


def _accumulate_order(rate, t, tol):
    mean = rate * t
    total, m = 0.0, 0
    while True:
        total += stats.poisson.pmf(m, mean)
        if total >= 1 - tol:
            return max(m, 2)
        m += 1


class TestTruncation:
    def test_small_rate(self):
        order = poisson_truncation_order(2.5e-3, 5.0, 1e-10)
        assert order == _accumulate_order(2.5e-3, 5.0, 1e-10) == 4

    def test_unit_rate_long_horizon(self):
        # exact tail: P(N > 35) = 1.67e-10, P(N > 36) = 4.46e-11
        assert poisson_truncation_order(1.0, 10.0, 1e-10) == 36
        assert stats.poisson.sf(36, 10.0) < 1e-10 < stats.poisson.sf(35, 10.0)

    def test_floor_at_zero_time(self):
        assert poisson_truncation_order(7.0, 0.0, 1e-10) == 2

    @settings(max_examples=60, deadline=None)
    @given(
        rate=st.floats(1e-4, 50.0),
        t=st.floats(0.0, 20.0),
        tol=st.sampled_from([1e-4, 1e-8, 1e-10, 1e-12]),
    )
    def test_tail_bound(self, rate, t, tol):
        order = poisson_truncation_order(rate, t, tol)
        mass = sum(poisson_pmf(rate, t, m) for m in range(order + 1))
        assert 1 - tol - 1e-14 <= mass <= 1 + 1e-12
        assert order >= 2


class TestNormal:
    def test_median(self):
        assert normal_cdf(1.3, 1.3, 0.7) == 0.5

    def test_component_one_hard_term(self):
        assert abs(normal_cdf(7.0, 1.5, 0.4) - 1.0) <= 1e-15
        assert normal_sf(7.0, 1.5, 0.4) == pytest.approx(2.5464763159739570e-43, rel=1e-12)

    def test_quantile(self):
        # mpmath: Phi(-1.959964) = 0.0249999990964
        assert normal_cdf(2.0 - 1.959964 * 3.0, 2.0, 3.0) == pytest.approx(0.024999999096442402, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            normal_cdf(0.0, 0.0, 0.0)

    @given(x=st.floats(-40, 40), mean=st.floats(-10, 10), sd=st.floats(0.01, 10))
    def test_symmetry(self, x, mean, sd):
        assert normal_cdf(x, mean, sd) + normal_cdf(2 * mean - x, mean, sd) == pytest.approx(1.0, abs=1e-12)


class TestGammaCdf:
    def test_zero(self):
        assert gamma_cdf(0.0, 2.0, 3.0) == 0.0
        assert gamma_cdf(-1.0, 2.0, 3.0) == 0.0

    def test_limit(self):
        assert gamma_cdf(math.inf, 4.0, 2.0) == 1.0
        assert gamma_cdf(1e4, 4.0, 2.0) == 1.0

    def test_component_one_pure_degradation(self):
        quad = integrate.quad(lambda x: stats.gamma.pdf(x, 9.9), 0, 20, epsabs=1e-14)[0]
        value = gamma_cdf(20.0, 9.9, 1.0)
        assert value == pytest.approx(0.99540039499685139, abs=1e-13)
        assert value == pytest.approx(quad, abs=1e-12)

    @pytest.mark.parametrize("shape,x,expected", GAMMA_REFERENCE)
    def test_against_reference(self, shape, x, expected):
        assert gamma_cdf(x, shape, 1.0) == pytest.approx(expected, abs=1e-13)

    @pytest.mark.parametrize("shape,scale", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
    def test_domain(self, shape, scale):
        with pytest.raises(DomainError):
            gamma_cdf(1.0, shape, scale)

    @settings(max_examples=80)
    @given(x=st.floats(0.0, 200.0), shape=st.floats(1e-3, 120.0), scale=st.floats(0.05, 5.0))
    def test_scale_invariance_and_scipy(self, x, shape, scale):
        value = gamma_cdf(x, shape, scale)
        assert value == pytest.approx(gamma_cdf(x / scale, shape, 1.0), abs=1e-12)
        assert value == pytest.approx(special.gammainc(shape, x / scale), abs=1e-12)

    @given(shape=st.floats(0.01, 80.0), xs=st.lists(st.floats(0.0, 150.0), min_size=2, max_size=8))
    def test_monotone(self, shape, xs):
        values = [gamma_cdf(x, shape, 1.0) for x in sorted(xs)]
        assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))


class TestMfoldDensity:
    def test_single_damage(self):
        assert mfold_damage_density(1, 2.0, 0.5, 2.0) == pytest.approx(0.79788456080286536, rel=1e-14)

    def test_four_damages(self):
        assert mfold_damage_density(4, 2.0, 0.5, 8.0) == pytest.approx(0.39894228040143268, rel=1e-14)

    def test_tails(self):
        assert mfold_damage_density(2, 0.0, 1.0, math.inf) == 0.0
        assert mfold_damage_density(2, 0.0, 1.0, -math.inf) == 0.0
        assert mfold_damage_density(2, 0.0, 1.0, 80.0) == 0.0

    def test_zero_order_rejected(self):
        with pytest.raises(DegenerateOrderError):
            mfold_damage_density(0, 1.0, 1.0, 0.0)

    @pytest.mark.parametrize("m", range(1, 11))
    def test_normalizes(self, m):
        mean, sd = 2.0, 0.5
        centre, width = m * mean, 12 * math.sqrt(m) * sd
        total, _ = integrate.quad(
            lambda y: mfold_damage_density(m, mean, sd, y), centre - width, centre + width, epsabs=1e-13, limit=200
        )
        assert total == pytest.approx(1.0, abs=1e-8)
