"""Compare the compiled and pure-numpy kernel backends.

    python benchmarks/bench_kernels.py [--n 1000,10000,100000] [--reps 15]

Times xi, tau_squared_hat and a 199-permutation test on the same data under
each backend and checks that both produce identical numbers.
"""

import argparse
import time

import numpy as np

from xicor import _backend, tau_squared_hat, test_permutation, xi


def median_time(fn, reps):
    fn()
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", default="1000,10000,100000")
    ap.add_argument("--reps", type=int, default=15)
    args = ap.parse_args()
    grid = [int(v) for v in args.n.split(",")]
    backends = _backend.available()
    rng = np.random.default_rng(7)

    print(f"{'n':>8} {'task':<12}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for n in grid:
        x = rng.random(n)
        y = np.round(rng.random(n), 2)  # y with ties
        tasks = {
            "xi": lambda: xi(x, y).value,
            "tau_hat": lambda: tau_squared_hat(y).value,
            "perm_199": lambda: test_permutation(x, y, n_permutations=199).p_value,
        }
        if n > 20_000:
            tasks.pop("perm_199")
        for name, fn in tasks.items():
            times, values = [], []
            for b in backends:
                _backend.use(b)
                values.append(fn())
                times.append(median_time(fn, args.reps))
            assert all(v == values[0] for v in values), (name, n, values)
            speed = times[0] / times[-1] if len(times) > 1 else 1.0
            print(f"{n:>8} {name:<12}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times) + f"{speed:>9.2f}x")
    _backend.use(backends[-1])


if __name__ == "__main__":
    main()
