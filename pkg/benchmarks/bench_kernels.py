"""Compare the numba and numpy reliability backends.

Times three workloads on the bundled example systems:

* ``curve``: system reliability on a 2,000-point time grid
* ``cost-curve``: the optimizer's 400-point coarse scan (12,800 reliability
  evaluations through the gap-by-gap downtime integral)
* ``optimize``: one full next-interval optimization
* ``points``: 500 single-time evaluations, the access pattern of the
  golden-section refinement and of scalar API calls

Usage::

    python benchmarks/bench_kernels.py [--repeat N] [--config series3|parallel2|path.json]

The first numba call compiles (or loads the on-disk cache); it is excluded
from the timings and reported separately.
"""
import argparse
import time

import numpy as np

from dyninspect import load_config, optimal_interval, reliability_curve
from dyninspect._accel import HAVE_NUMBA, NUMBA_DISABLED
from dyninspect.cost import cost_rate_curve


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--config", default="series3")
    args = parser.parse_args()

    cfg = load_config(args.config)
    sys_, costs = cfg.system, cfg.costs
    ages = list(cfg.scenarios[8]) if cfg.scenarios and len(cfg.scenarios) > 8 else [0.0] * sys_.n
    ts = np.linspace(0.01, 10.0, 2000)
    taus = cfg.optimizer.grid()

    backends = ["numpy"]
    if HAVE_NUMBA and not NUMBA_DISABLED:
        backends.insert(0, "numba")
        start = time.perf_counter()
        reliability_curve(sys_, ts[:2], ages, backend="numba")
        print(f"numba first call (compile or cache load): {time.perf_counter() - start:.2f}s")
    else:
        print("numba disabled or unavailable; timing the numpy backend only")

    workloads = {
        "curve": lambda b: reliability_curve(sys_, ts, ages, backend=b),
        "cost-curve": lambda b: cost_rate_curve(sys_, costs, taus, ages, backend=b),
        "optimize": lambda b: optimal_interval(sys_, costs, ages, cfg.optimizer, backend=b),
        "points": lambda b: [reliability_curve(sys_, [t], ages, backend=b) for t in ts[::4]],
    }
    print(f"config={args.config} ages={ages} repeat={args.repeat}")
    print(f"{'workload':<12}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, work in workloads.items():
        row = [best_of(lambda: work(b), args.repeat) for b in backends]
        line = f"{name:<12}" + "".join(f"{t:>11.3f}s" for t in row)
        if len(row) == 2:
            line += f"{row[1] / row[0]:>11.1f}x"
        print(line)

    if len(backends) == 2:
        a = reliability_curve(sys_, ts, ages, backend="numba")
        b = reliability_curve(sys_, ts, ages, backend="numpy")
        print(f"max |numba - numpy| on the curve: {np.max(np.abs(a - b)):.2e}")


if __name__ == "__main__":
    main()
