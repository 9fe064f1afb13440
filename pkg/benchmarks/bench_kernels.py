"""Compare the compiled and numpy region kernels.

    python3 benchmarks/bench_kernels.py [--points 200000] [--repeat 5]

Prints the best-of-``repeat`` time per kernel and backend, the speed-up and the
largest disagreement between the two backends.
"""

import argparse
import timeit

import numpy as np

from kreintools import _backend

CASES = {
    "capsule_signed_distance": (-1.0, 2.0, 0.75),
    "ballunion_qmin": (1.5, 0.4, 0.3),
    "ballunion_signed_distance": (1.5, 0.4, 0.3),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    zr = rng.uniform(-4.0, 4.0, args.points)
    zi = rng.uniform(-4.0, 4.0, args.points)
    py = _backend.get("python")
    try:
        cy = _backend.get("cython")
    except ImportError:
        cy = None
        print("compiled extension not built; timing the numpy backend only")

    print(f"{'kernel':28s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s} {'max diff':>10s}")
    for name, params in CASES.items():
        f_py = getattr(py, name)
        t_py = min(timeit.repeat(lambda: f_py(zr, zi, *params), number=1, repeat=args.repeat))
        if cy is None:
            print(f"{name:28s} {1e3 * t_py:12.2f}")
            continue
        f_cy = getattr(cy, name)
        t_cy = min(timeit.repeat(lambda: f_cy(zr, zi, *params), number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(np.asarray(f_py(zr, zi, *params)) - np.asarray(f_cy(zr, zi, *params)))))
        print(f"{name:28s} {1e3 * t_py:12.2f} {1e3 * t_cy:12.2f} {t_py / t_cy:8.1f}x {diff:10.2e}")


if __name__ == "__main__":
    main()
