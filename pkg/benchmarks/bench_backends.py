"""Compare the numpy and compiled kernel cores.

    python benchmarks/bench_backends.py [--repeat 5] [--tol 1e-12]

Times the quadrature route of ``best_constant`` per root set and the raw
GK15 panel throughput, once per core, and checks that both cores agree.
"""
import argparse
import time

import numpy as np

from ulamc import _backend
from ulamc.constant import best_constant
from ulamc.kernel import build_kernel
from ulamc.poly import RootSet

CASES = {
    "real n=2": [-1, -2],
    "complex pair": [-1 + 1j, -1 - 1j],
    "mixed n=3": [0.5 + 1j, -1 - 0.5j, 2],
    "slow oscillator": [-0.05 + 6j, -0.05 - 6j, -1],
    "real n=8": [-0.5, -1, -1.5, -2, -2.5, -3, -3.5, -4],
    "mixed n=6": [1 + 3j, 1 - 3j, 0.3, -0.2 + 2j, -0.2 - 2j, -4],
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--tol", type=float, default=1e-12)
    args = ap.parse_args()

    cores = {"numpy": _backend.pure}
    if _backend.compiled is not None:
        cores["cython"] = _backend.compiled
    else:
        print("compiled core not built; timing numpy only")

    header = f"{'case':18s}" + "".join(f"{name:>12s}" for name in cores) + f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for label, roots in CASES.items():
        rs = RootSet.from_roots(roots)
        row, values = [], []
        for core in cores.values():
            _backend.core = core
            dt, res = best_of(lambda: best_constant(rs, args.tol, method="quadrature"), args.repeat)
            row.append(dt)
            values.append(res.value)
        if len(values) == 2:
            assert abs(values[0] - values[1]) <= 1e-13 * abs(values[0]), (label, values)
        speed = f"{row[0] / row[-1]:9.1f}x" if len(row) == 2 else ""
        print(f"{label:18s}" + "".join(f"{1e3 * t:10.2f}ms" for t in row) + speed)

    group = build_kernel(RootSet.from_roots(CASES["mixed n=6"])).pos
    a = np.linspace(0, 50, 20001)[:-1]
    b = a + a[1]
    rates = []
    for core in cores.values():
        dt, _ = best_of(lambda: core.gk15_expsum(a, b, *group.core_args(), 0, 0.0), args.repeat)
        rates.append(len(a) / dt)
    print()
    print("GK15 panels/s (n=3 group): "
          + ", ".join(f"{name} {r:,.0f}" for name, r in zip(cores, rates)))
    _backend.core = _backend.compiled or _backend.pure


if __name__ == "__main__":
    main()
