"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]

Times a dense energy row of the barrier observables, a delta row, and a
batch of golden-section refinements, then prints the speed-up per kernel.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from fracscatter import _pykernels
from fracscatter.core import LevyContext

try:
    from fracscatter import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def _cases(n: int):
    ctx = LevyContext(1.99)
    es = ctx.energy_scale
    E = np.linspace(100.0, 600.0, n)
    V = complex(9.1675, -10.0)
    zeta = -1.5j
    lo = np.linspace(260.0, 290.0, 50)

    def barrier(mod):
        return lambda: mod.barrier_log_observables(ctx.alpha, es, V, 10.0, E)

    def delta(mod):
        return lambda: mod.delta_log_observables(ctx.alpha, es, zeta, E)

    def golden(mod):
        def run():
            for a in lo:
                mod.golden_barrier(ctx.alpha, es, V, 10.0, 2, a, a + 0.5, 1e-10, 200)

        return run

    return {"barrier row": barrier, "delta row": delta, "golden x50": golden}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--points", type=int, default=100_000, help="energies per row")
    ap.add_argument("--repeat", type=int, default=5, help="best-of repeats")
    args = ap.parse_args(argv)

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the numpy backend only")

    print(f"{'kernel':<12} " + " ".join(f"{b:>12}" for b in backends) + "   speed-up")
    for name, make in _cases(args.points).items():
        times = {}
        for b, mod in backends.items():
            fn = make(mod)
            fn()  # warm-up
            times[b] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        cells = " ".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        ratio = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{name:<12} {cells}   {ratio:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
