import numpy as np
import pytest

from dyninspect import ComponentModel, CostParams, ShockProcess, SystemModel, load_config

COMPONENTS = (
    ComponentModel(20, 7, 3, 1.0, 2.0, 0.5, 1.5, 0.4),
    ComponentModel(30, 5, 2, 0.6, 2.5, 0.2, 2.0, 0.3),
    ComponentModel(35, 6, 1, 0.3, 3.0, 0.1, 1.2, 0.15),
)
EXAMPLE_RATE = 2.5e-3
EXAMPLE_COSTS = CostParams(5.0, 10.0, 80.0)


@pytest.fixture(scope="session")
def series3():
    return SystemModel("series", COMPONENTS, ShockProcess(EXAMPLE_RATE))


@pytest.fixture(scope="session")
def parallel2():
    return SystemModel("parallel", COMPONENTS[:2], ShockProcess(EXAMPLE_RATE))


@pytest.fixture(scope="session")
def costs():
    return EXAMPLE_COSTS


@pytest.fixture(scope="session")
def series3_config():
    return load_config("series3")


@pytest.fixture(scope="session")
def parallel2_config():
    return load_config("parallel2")


def random_component(rng) -> ComponentModel:
    """A valid component whose degradation crosses the threshold within a few time units."""
    H = rng.uniform(8, 30)
    shape_rate = rng.uniform(0.5, 4)
    scale = rng.uniform(0.3, 1.5)
    dsd = rng.uniform(0.1, 0.6)
    dmean = dsd * rng.uniform(5.0, 10.0)
    msd = rng.uniform(0.2, 0.6)
    return ComponentModel(H, rng.uniform(2, 4), shape_rate, scale, dmean, dsd, rng.uniform(0.5, 1.5), msd)


def random_system(rng, n=None, topology=None) -> SystemModel:
    n = n or int(rng.integers(1, 4))
    topology = topology or ("series" if rng.random() < 0.5 else "parallel")
    return SystemModel(topology, [random_component(rng) for _ in range(n)], ShockProcess(rng.uniform(0.05, 0.8)))


def random_ages(rng, sys, frac=0.6):
    return [float(rng.uniform(0, frac * c.soft_threshold)) for c in sys.components]


def median_life(sys, ages):
    """Rough time scale for the system: mean degradation reaching the threshold."""
    times = [
        (c.soft_threshold - a) / (c.gamma_shape_rate * c.gamma_scale + sys.shock.rate * c.damage_mean)
        for c, a in zip(sys.components, ages)
    ]
    return float(np.median(times))


# Acceptance verdicts, printed together at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
