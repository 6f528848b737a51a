"""Compare the numba and pure-numpy frontier expansion kernels.

    python3 benchmarks/bench_kernels.py [--repeat 20]

Times both kernels on synthetic frontiers, then a full period sweep under
each backend.
"""

import argparse
import time

import numpy as np

from langdiv import builtin, kernels
from langdiv.protocol import EnumerationConfig, InitialState, MeasurementProtocol, enumerate_language, step_matrices


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def frontier(rng, rows, dim):
    s = rng.normal(size=(rows, dim)) + 1j * rng.normal(size=(rows, dim))
    s /= np.linalg.norm(s, axis=1)[:, None]
    return s, rng.random(rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    machine = builtin.period5("10101")
    step = step_matrices(machine, 3)

    # compile outside the timed region
    s, w = frontier(rng, 4, 5)
    kernels.expand_quantum_numba(s, w, step, 1e-12)

    print(f"{'frontier rows':>14} {'numba (ms)':>11} {'numpy (ms)':>11} {'ratio':>7}")
    for rows in (16, 256, 4096, 65536):
        s, w = frontier(rng, rows, 5)
        fast = best_of(lambda: kernels.expand_quantum_numba(s, w, step, 1e-12), args.repeat)
        slow = best_of(lambda: kernels.expand_quantum_numpy(s, w, step, 1e-12), args.repeat)
        print(f"{rows:>14} {fast * 1e3:>11.3f} {slow * 1e3:>11.3f} {slow / fast:>7.2f}")

    kt = builtin.kicked_top()
    cfg = EnumerationConfig(14)
    print("\nenumeration, kicked top, uniform ensemble, L=14, periods 1..20")
    for backend in ("numba", "numpy"):
        def run():
            for p in range(1, 21):
                enumerate_language(kt, MeasurementProtocol(p, InitialState.uniform()), cfg, backend=backend)
        print(f"  {backend:<6} {best_of(run, max(1, args.repeat // 10)) * 1e3:9.1f} ms")


if __name__ == "__main__":
    main()
