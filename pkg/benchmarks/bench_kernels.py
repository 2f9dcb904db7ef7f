"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--n 2000]

Also checks that both backends agree on every output.
"""
import argparse
import cmath
import math
import timeit

import numpy as np

from wlab import _kernels_py as py

try:
    from wlab import _ckernels as cy
except ImportError:
    cy = None


def cases(n, rng):
    tau = 0.5 + 1.05j
    q = cmath.exp(1j * math.pi * tau)
    z = rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(-0.5, 0.5, n) * tau.imag
    v = math.pi * z
    q14 = cmath.exp(1j * math.pi * tau / 4)
    eps, cap = 1e-17, 10_000
    return {
        "theta_nullwerte": lambda m: m.theta_nullwerte(q, eps, cap),
        "lambert_e2": lambda m: m.lambert_e2(q * q, eps, cap),
        "fourier_tails": lambda m: m.fourier_tails(z, q * q, eps, cap),
        "theta12": lambda m: m.theta12(v, q, q14, eps, cap),
    }


def _flat(x):
    if isinstance(x, tuple):
        return np.concatenate([np.ravel(np.asarray(t, dtype=complex)) for t in x])
    return np.ravel(np.asarray(x, dtype=complex))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=2000)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'numpy ms':>12}{'cython ms':>12}{'speedup':>10}{'max diff':>12}")
    for name, fn in cases(args.n, rng).items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:<16}{tp:>12.3f}{'n/a':>12}")
            continue
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        a, b = _flat(fn(py)), _flat(fn(cy))
        diff = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))
        print(f"{name:<16}{tp:>12.3f}{tc:>12.3f}{tp / tc:>10.1f}{diff:>12.1e}")


if __name__ == "__main__":
    main()
