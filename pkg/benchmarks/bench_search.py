"""Compare the compiled and NumPy variance kernels.

Runs the same exhaustive search at several channel counts on each
backend, checks the results agree bitwise, and prints the timings.

    python3 benchmarks/bench_search.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from ofdmphase import SearchSpec, search
from ofdmphase._kernels import BACKENDS, default_backend


def time_search(n_channels: int, backend: str, repeat: int):
    spec = SearchSpec(n_channels=n_channels)
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = search(spec, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="keep the best of this many runs")
    parser.add_argument("--channels", type=int, nargs="*",
                        default=[5, 7, 9, 10, 11],
                        help="channel counts to benchmark")
    args = parser.parse_args()

    print(f"available backends: {', '.join(BACKENDS)} "
          f"(default: {default_backend()})")
    print(f"{'n':>3} {'cases':>12} " +
          " ".join(f"{name + ' [s]':>14}" for name in BACKENDS) +
          f" {'speedup':>8}")
    for n in args.channels:
        timings = {}
        results = {}
        for backend in BACKENDS:
            timings[backend], results[backend] = time_search(
                n, backend, args.repeat)
        reference = results[BACKENDS[0]]
        for backend in BACKENDS[1:]:
            other = results[backend]
            assert other.worst_v == reference.worst_v
            assert np.array_equal(other.counts, reference.counts)
        ratio = timings["numpy"] / timings["compiled"]
        print(f"{n:>3} {reference.total_cases:>12} " +
              " ".join(f"{timings[name]:>14.4f}" for name in BACKENDS) +
              f" {ratio:>7.2f}x")
    print("results agreed bitwise on every row")


if __name__ == "__main__":
    main()
