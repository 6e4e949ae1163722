import numpy as np
import pytest

from dyninspect import (
    ConfigError,
    CostParams,
    DomainError,
    ShockProcess,
    SystemModel,
    cost_rate,
    cost_rate_curve,
    expected_downtime,
    expected_downtime_derivative_form,
    failure_time_density,
    gamma_cdf,
    normal_cdf,
    system_reliability,
)
from dyninspect.cost import piecewise_downtime
from dyninspect.errors import NumericalConsistencyError

from .conftest import EXAMPLE_COSTS, COMPONENTS, median_life, random_ages, random_system


class TestCostParams:
    def test_all_zero_rejected(self):
        with pytest.raises(ConfigError):
            CostParams(0, 0, 0)

    def test_negative_rejected(self):
        with pytest.raises(ConfigError) as info:
            CostParams(5, -1, 80)
        assert info.value.problems[0][0] == "costs.replacement_cost"


class TestExpectedDowntime:
    def test_example_interval_two_routes(self, series3):
        identity = expected_downtime(series3, 3.3, [0, 0, 0])
        derivative = expected_downtime_derivative_form(series3, 3.3, [0, 0, 0])
        assert 0 < identity < 3.3
        assert derivative == pytest.approx(identity, rel=1e-6)

    def test_routes_agree_on_random_systems(self):
        rng = np.random.default_rng(31)
        for _ in range(12):
            sys = random_system(rng)
            u = random_ages(rng, sys)
            tau = median_life(sys, u) * rng.uniform(0.5, 1.5)
            identity = expected_downtime(sys, tau, u)
            derivative = expected_downtime_derivative_form(sys, tau, u)
            assert derivative == pytest.approx(identity, rel=1e-6, abs=1e-12)

    def test_failed_system_is_down_throughout(self, series3, parallel2):
        assert expected_downtime(series3, 2.7, [0, 31, 0]) == 2.7
        assert expected_downtime(parallel2, 1.1, [25, 30]) == 1.1

    def test_tiny_interval(self, series3):
        assert expected_downtime(series3, 1e-6, [0, 0, 0]) < 1e-12

    def test_bounded_and_nondecreasing(self):
        rng = np.random.default_rng(8)
        for _ in range(6):
            sys = random_system(rng)
            u = random_ages(rng, sys)
            taus = np.linspace(0.1, 3 * median_life(sys, u), 25)
            values = np.array([expected_downtime(sys, t, u) for t in taus])
            assert np.all(values >= 0) and np.all(values <= taus)
            assert np.all(np.diff(values) >= -1e-12)

    def test_rejects_nonpositive_tau(self, series3):
        with pytest.raises(DomainError):
            expected_downtime(series3, 0.0, [0, 0, 0])

    def test_piecewise_matches_composite(self, series3):
        edges = np.linspace(0.0, 3.3, 120)
        pieces, rel = piecewise_downtime(series3, edges, [2, 5, 7])
        assert pieces.sum() == pytest.approx(expected_downtime(series3, 3.3, [2, 5, 7]), rel=1e-10)
        assert rel[-1] == pytest.approx(system_reliability(series3, 3.3, [2, 5, 7]), abs=1e-15)


class TestDensity:
    def test_flat_region(self, series3):
        # the only failure mass this early is the dropped negative-damage tail, rate * P(Y1 < 0)
        dropped = series3.shock.rate * normal_cdf(0.0, COMPONENTS[0].damage_mean, COMPONENTS[0].damage_sd)
        assert failure_time_density(series3, 0.05, [0, 0, 0]) == pytest.approx(dropped, rel=2e-2)

    def test_integrates_to_failure_probability(self):
        sys = SystemModel("series", COMPONENTS[:1], ShockProcess(0.3))
        grid = np.linspace(1e-3, 40.0, 20001)
        dens = failure_time_density(sys, grid, [0.0])
        total = np.trapezoid(dens, grid)
        assert total == pytest.approx(1.0 - system_reliability(sys, 40.0, [0.0]), abs=1e-5)
        assert total == pytest.approx(1.0, abs=1e-5)

    def test_vanishing_rate_matches_gamma_differencing(self):
        c = COMPONENTS[0]
        sys = SystemModel("series", (c,), ShockProcess(1e-300))
        for t in (1.5, 3.3, 5.0, 7.2):
            h = 1e-5
            upper = gamma_cdf(c.soft_threshold, c.gamma_shape_rate * (t - h), c.gamma_scale)
            lower = gamma_cdf(c.soft_threshold, c.gamma_shape_rate * (t + h), c.gamma_scale)
            assert failure_time_density(sys, t, [0.0]) == pytest.approx((upper - lower) / (2 * h), abs=1e-6)

    def test_strongly_negative_density_raises(self, series3, monkeypatch):
        import dyninspect.cost as cost

        monkeypatch.setattr(cost, "reliability_curve", lambda s, ts, *a: np.asarray(ts, dtype=float))
        with pytest.raises(NumericalConsistencyError):
            failure_time_density(series3, 1.0, [0, 0, 0])


class TestCostRate:
    def test_inspection_only(self, series3):
        costs = CostParams(5.0, 0.0, 0.0)
        taus = [0.5, 1.0, 2.0, 4.0]
        values = [cost_rate(series3, costs, t, [0, 0, 0]) for t in taus]
        assert values == pytest.approx([5.0 / t for t in taus], rel=1e-15)
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_diverges_at_zero(self, series3):
        assert cost_rate(series3, EXAMPLE_COSTS, 1e-8, [0, 0, 0]) > 1e8

    def test_failed_system_closed_form(self, series3):
        for tau in (0.2, 1.0, 5.0):
            expected = (5.0 + 10.0 + 80.0 * tau) / tau
            assert cost_rate(series3, EXAMPLE_COSTS, tau, [21, 0, 0]) == pytest.approx(expected, rel=1e-10)

    def test_lower_bound(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            sys = random_system(rng)
            u = random_ages(rng, sys)
            tau = rng.uniform(0.2, 6.0)
            bound = 80.0 * expected_downtime(sys, tau, u) / tau
            assert cost_rate(sys, EXAMPLE_COSTS, tau, u) >= bound >= 0

    def test_interior_minimum_for_example_system(self, series3):
        taus = np.geomspace(0.3, 15, 120)
        curve = cost_rate_curve(series3, EXAMPLE_COSTS, taus, [0, 0, 0])
        k = int(np.argmin(curve))
        assert 0 < k < taus.size - 1

    def test_curve_matches_pointwise(self, series3):
        taus = np.geomspace(0.05, 8, 300)
        curve = cost_rate_curve(series3, EXAMPLE_COSTS, taus, [3, 4, 5])
        for k in (0, 57, 150, 299):
            assert curve[k] == pytest.approx(cost_rate(series3, EXAMPLE_COSTS, taus[k], [3, 4, 5]), rel=1e-9)

    def test_curve_rejects_bad_grid(self, series3):
        with pytest.raises(DomainError):
            cost_rate_curve(series3, EXAMPLE_COSTS, [1.0, 0.5], [0, 0, 0])
