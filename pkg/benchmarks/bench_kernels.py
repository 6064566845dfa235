"""Compare the compiled kernels against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from mildflow import _kernels_py, kernels
from mildflow.lab.gronwall import GronwallSpec, volterra_oracle

try:
    from mildflow import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    impls = [("python", _kernels_py)] + ([("compiled", _compiled)] if _compiled else [])
    print(f"active backend: {kernels.BACKEND}")
    spec = GronwallSpec(((1.0, 0.5),), ((1.0, 0.5),), 1.0)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'size':>8}" + "".join(f"{n:>14}" for n, _ in impls) + f"{'speedup':>10}")
    for M in (1024, 4096, 16384):
        times, outs = [], []
        for _, impl in impls:
            dt, out = best_of(lambda: volterra_oracle(spec, M, impl=impl)[1], args.repeat)
            times.append(dt)
            outs.append(out)
        if len(outs) == 2:
            assert np.allclose(outs[0], outs[1], rtol=1e-12, atol=0)
        sp = f"{times[0] / times[-1]:>9.1f}x" if len(times) == 2 else ""
        print(f"{'volterra_lag_solve':<22}{M:>8}" + "".join(f"{t:>13.4f}s" for t in times) + sp)
    for M in (256, 1024, 2048):
        V = rng.standard_normal((M + 1, 128))
        t = np.linspace(0, 1, M + 1)
        times, outs = [], []
        for _, impl in impls:
            dt, out = best_of(lambda: kernels.pairwise_holder_sup(V, t, 0.5, 64, impl=impl), args.repeat)
            times.append(dt)
            outs.append(out)
        if len(outs) == 2:
            assert outs[0][1:] == outs[1][1:] and np.isclose(outs[0][0], outs[1][0], rtol=1e-12)
        sp = f"{times[0] / times[-1]:>9.1f}x" if len(times) == 2 else ""
        print(f"{'pairwise_holder_sup':<22}{M:>8}" + "".join(f"{t:>13.4f}s" for t in times) + sp)


if __name__ == "__main__":
    main()
