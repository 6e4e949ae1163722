"""Reliability, cost rate and dynamic inspection planning for multi-component
systems with gamma degradation and shared Poisson shocks."""

from ._accel import DEFAULT_BACKEND
from .component import (
    ComponentModel,
    component_reliability,
    hard_failure_prob,
    hard_survival_prob,
    soft_survival_given_m_shocks,
)
from .config import RunConfig, emit_config, load_config
from .cost import (
    CostParams,
    cost_rate,
    cost_rate_curve,
    expected_downtime,
    expected_downtime_derivative_form,
    failure_time_density,
)
from .errors import (
    ConfigError,
    DegenerateOrderError,
    DomainError,
    DyninspectError,
    NumericalConsistencyError,
    TopologyMismatchError,
)
from .kernels import (
    ShockProcess,
    gamma_cdf,
    mfold_damage_density,
    normal_cdf,
    normal_sf,
    poisson_pmf,
    poisson_truncation_order,
)
from .numerics import NumericsConfig
from .optimizer import OptimizerConfig, ScenarioResult, optimal_interval, scenario_sweep
from .simulation import SimulationEstimate, SimulationPlan, simulate, simulate_expected_downtime, simulate_reliability
from .system import (
    SystemModel,
    Topology,
    parallel_reliability,
    reliability_curve,
    series_reliability,
    system_reliability,
)

__version__ = "0.1.0"
