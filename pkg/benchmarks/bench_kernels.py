"""Compare the compiled kernels with the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``; add ``--quick`` for a short run.
"""
import argparse
import math
import random
import timeit

from qmaass import _kernels_py

try:
    from qmaass import _kernels
except ImportError:  # extension not built
    _kernels = None


def _workloads(quick: bool):
    rng = random.Random(1)
    n = 200 if quick else 600
    # the factors of a typical mock theta summand: (q;q)_k / (-q;q)_{2k+1}
    factors = [(j, 1, 1) for j in range(1, 21)] + [(j, -1, -1) for j in range(1, 42)]
    xs = [10 ** rng.uniform(-6, math.log10(700)) for _ in range(2000 if quick else 20000)]
    m = 500 if quick else 4000
    qs = [rng.uniform(-40, 40) for _ in range(m)]
    cre = [rng.uniform(-1, 1) for _ in range(m)]
    cim = [rng.uniform(-1, 1) for _ in range(m)]
    a = [rng.randint(-50, 50) for _ in range(n)]
    b = [rng.randint(-50, 50) for _ in range(n)]
    return {
        "binom_product": lambda k: k.binom_product(n, factors),
        "dense_mul": lambda k: k.dense_mul(a, b, n),
        "k0": lambda k: [k.k0(x) for x in xs],
        "theta_k0_sum": lambda k: k.theta_k0_sum(qs, cre, cim, 0.13, 1.1),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--quick", action="store_true")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    backends = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    if _kernels is None:
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'kernel':<14}" + "".join(f"{name:>12}" for name, _ in backends) + "     speedup")
    for label, fn in _workloads(args.quick).items():
        times = []
        for _, mod in backends:
            t = timeit.Timer(lambda: fn(mod)).repeat(args.repeat, 1)
            times.append(min(t))
        row = f"{label:<14}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
