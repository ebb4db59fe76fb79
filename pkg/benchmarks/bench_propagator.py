"""Time one stroke propagator on the numba and numpy backends.

    python3 benchmarks/bench_propagator.py [--repeat 5]

The numba column excludes compilation (a warm-up call runs first).
"""

import argparse
import time

import numpy as np

from spinotto import _kernels
from spinotto.propagator import stroke_unitary
from spinotto.pulses import FieldProtocol, PulseShape
from spinotto.spin_algebra import spin_operators


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    proto = FieldProtocol(0.5, 0.5, 0.05, 100.0, PulseShape.sinusoidal())
    print(f"{'2I':>3} {'steps':>8} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8} {'max |dU|':>9}")
    for two_i in (1, 4):
        ops = spin_operators(two_i)
        for n in (4096, 65536, 262144):
            u_np = stroke_unitary(proto, ops, n, backend="numpy")
            t_np = best_of(lambda: stroke_unitary(proto, ops, n, backend="numpy"), args.repeat)
            if "numba" in _kernels.BACKENDS:
                u_nb = stroke_unitary(proto, ops, n, backend="numba")
                t_nb = best_of(lambda: stroke_unitary(proto, ops, n, backend="numba"), args.repeat)
                diff = np.abs(u_np - u_nb).max()
                print(f"{two_i:>3} {n:>8} {1e3 * t_np:>11.2f} {1e3 * t_nb:>11.2f} {t_np / t_nb:>8.1f} {diff:>9.1e}")
            else:
                print(f"{two_i:>3} {n:>8} {1e3 * t_np:>11.2f} {'n/a':>11}")


if __name__ == "__main__":
    main()
