"""Compare the compiled and numpy kernel backends.

Run with ``python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]``.
Prints per-call timings, the speedup, and the largest relative difference
between backends for each kernel, plus a full plate quadrature timing.
"""
import argparse
import time

import numpy as np

from vdwfriction import kernels
from vdwfriction.plate import PlateConfig, pair_roentgen_integrand, pair_vdw_integrand, plate_integrate


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def max_rel(a, b):
    a, b = (a if isinstance(a, tuple) else (a,)), (b if isinstance(b, tuple) else (b,))
    return max(float(np.max(np.abs(x - y)) / max(np.max(np.abs(x)), 1e-300)) for x, y in zip(a, b))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=20000, help="batch size")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if "compiled" not in kernels.available_backends():
        print("compiled backend unavailable; only the numpy backend is installed")
        return 1
    rng = np.random.default_rng(1)
    R = rng.normal(size=(args.n, 3)) * 3
    v = np.array([1e-3, 2e-4, -5e-4])
    a, b = np.array([0.6, 0.0, 0.8]), np.array([0.0, 1.0, 0.0])
    py, cy = kernels.get_backend("python"), kernels.get_backend("compiled")
    X = py.electric(1.0, R)
    Y = py.magnetic(1.0, R)
    cases = {
        "electric": lambda m: m.electric(1.0, R),
        "magnetic": lambda m: m.magnetic(1.0, R),
        "bundle": lambda m: m.bundle(1.0, R, v),
        "iso_levi": lambda m: m.iso_levi(X, Y),
        "fixed_levi": lambda m: m.fixed_levi(X, Y, a, b),
    }
    print(f"{'kernel':<12}{'python ms':>12}{'compiled ms':>14}{'speedup':>10}{'max rel diff':>15}")
    for name, call in cases.items():
        tp, op = best_of(lambda: call(py), args.repeat)
        tc, oc = best_of(lambda: call(cy), args.repeat)
        print(f"{name:<12}{tp * 1e3:>12.2f}{tc * 1e3:>14.2f}{tp / tc:>10.1f}{max_rel(op, oc):>15.2e}")

    cfg_near = PlateConfig(d_red=0.01, sigma_red=1.0, beta=1e-6, rho=0.98)
    cfg_far = PlateConfig(d_red=30.0, sigma_red=1.0, beta=1e-6, rho=0.98)
    for label, fn, cfg in (("plate vdW d=0.01", pair_vdw_integrand, cfg_near),
                           ("plate Roentgen d=30", pair_roentgen_integrand, cfg_far)):
        res = {}
        for backend in ("python", "compiled"):
            kernels.use_backend(backend)
            res[backend] = best_of(lambda: plate_integrate(fn(cfg), cfg), max(1, args.repeat // 2))
        kernels.use_backend("compiled")
        tp, tc = res["python"][0], res["compiled"][0]
        diff = max_rel(res["python"][1], res["compiled"][1])
        print(f"{label:<22} python {tp:.3f} s  compiled {tc:.3f} s  speedup {tp / tc:.1f}  rel diff {diff:.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
