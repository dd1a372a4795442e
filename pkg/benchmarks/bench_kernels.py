"""Compare the compiled and numpy Riemann-Siegel backends.

    python3 benchmarks/bench_kernels.py --points 200000 --repeat 3

Times hardy_z_array on random heights in a few bands and a short ladder
build, once per available backend, and reports the largest disagreement.
"""

import argparse
import time

import numpy as np

from ladderlab import zeta_eval
from ladderlab.ladder import build_ladder


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--points", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--t-max", type=float, default=3000.0, help="ladder build height")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = zeta_eval.available_backends()
    print(f"backends: {', '.join(backends)} (default {zeta_eval.BACKEND})")
    rng = np.random.default_rng(args.seed)
    for lo, hi in ((50.0, 1e3), (1e3, 1e4), (1e4, 1e5)):
        t = np.sort(rng.uniform(lo, hi, args.points))
        results = {}
        for name in backends:
            secs, results[name] = best_of(lambda: zeta_eval.hardy_z_array(t, backend=name), args.repeat)
            print(f"hardy_z  t in [{lo:>7g}, {hi:>7g}]  {name:>6}: {secs * 1e3:9.2f} ms "
                  f"({secs / args.points * 1e9:7.1f} ns/point)")
        if len(results) == 2:
            a, b = results.values()
            print(f"  max |diff| / (1+|Z|) = {np.max(np.abs(a - b) / (1 + np.abs(a))):.2e}")

    for name in backends:
        saved = zeta_eval.BACKEND
        zeta_eval.BACKEND = name
        try:
            secs, _ = best_of(lambda: build_ladder(t_max=args.t_max), 1)
        finally:
            zeta_eval.BACKEND = saved
        print(f"ladder build to {args.t_max:g}  {name:>6}: {secs:.2f} s")


if __name__ == "__main__":
    main()
