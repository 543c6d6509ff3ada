"""Time the compiled kernels against their pure-Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Each case also checks that both backends return identical results.
"""

import argparse
import timeit

import numpy as np

from smklab import kernels
from smklab.catalog import get
from smklab.operators import OperatorParams, apply_many

CASES = {
    "poisson_window lam=1e2": lambda: kernels.poisson_window(1e2, 1e-12, 10**6),
    "poisson_window lam=1e5": lambda: kernels.poisson_window(1e5, 1e-12, 10**7),
    "oscillation_1d 1e6 nodes, w=300": lambda: kernels.oscillation_1d(_VEC, 300),
    "oscillation_2d 1000x1000, w=25": lambda: kernels.oscillation_2d(_MAT, 25, 25),
    "apply_many exp(-2x), n=1000, 201 pts": lambda: apply_many(
        OperatorParams(1000, 1.5), get("exp_neg2x").scalar(), np.linspace(0, 2, 201)),
}

_rng = np.random.default_rng(0)
_VEC = np.cumsum(_rng.standard_normal(10**6))
_MAT = np.cumsum(np.cumsum(_rng.standard_normal((1000, 1000)), axis=0), axis=1)


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, list):
        return all(x.value == y.value for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    width = max(map(len, CASES))
    for name, case in CASES.items():
        times, results = {}, {}
        for backend in backends:
            previous = kernels.use_backend(backend)
            try:
                results[backend] = case()
                times[backend] = min(timeit.repeat(case, number=1, repeat=args.repeat))
            finally:
                kernels.use_backend(previous)
        line = "  ".join(f"{b}={t * 1e3:9.3f} ms" for b, t in times.items())
        if len(times) == 2:
            line += f"  speedup={times['python'] / times['compiled']:6.1f}x"
            line += "  equal" if _same(results["python"], results["compiled"]) else "  MISMATCH"
        print(f"{name:<{width}}  {line}")


if __name__ == "__main__":
    main()
