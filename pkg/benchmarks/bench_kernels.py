"""Time the numba kernels against their pure-numpy / pure-Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from polcat import _kernels
from polcat.dynamics import CouplingFrame, ProductSuperposition, conditioned_state


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--terms", type=int, default=51, help="superposition size (product:N has N+1 terms)")
    ap.add_argument("--rk4-steps", type=int, default=25000)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    # a realistic product-preparation state for the Gram and purity kernels
    s, _ = conditioned_state(0.7j, 0.7j, CouplingFrame(1.0, 0.1), ProductSuperposition(args.terms - 1))
    amps = np.ascontiguousarray(s.amps)
    coeffs = np.ascontiguousarray(s.coeffs)
    y0 = np.array([0.5, 0.5, 0, 0, 0, 0], dtype=np.complex128)
    params = np.array([1e-4, 1.0, 0.5, 0.5, 25.0, 1.0])
    dt = 0.05 / 25.0

    cases = [
        ("gram", lambda: _kernels.gram_matrix_numba(amps), lambda: _kernels.gram_matrix_numpy(amps)),
        ("purity", lambda: _kernels.reduced_purity_numba(coeffs, amps, 0),
         lambda: _kernels.reduced_purity_numpy(coeffs, amps, 0)),
        ("rk4", lambda: _kernels.rk4_mean_field_numba(y0, params, 0.3 + 0j, 0.3j, dt, args.rk4_steps, 1000),
         lambda: _kernels.rk4_mean_field_python(y0, params, 0.3 + 0j, 0.3j, dt, args.rk4_steps, 1000)),
    ]
    print(f"{'kernel':8s} {'numba [s]':>12s} {'fallback [s]':>14s} {'speedup':>9s}")
    for name, fast, slow in cases:
        fast()  # compile / load cache
        tf = best_of(fast, args.repeat)
        ts = best_of(slow, max(1, args.repeat // 2) if name == "rk4" else args.repeat)
        print(f"{name:8s} {tf:12.3e} {ts:14.3e} {ts / tf:9.1f}x")


if __name__ == "__main__":
    main()
