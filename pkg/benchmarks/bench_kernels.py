"""Compare the compiled kernels against the NumPy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``. Prints one
line per kernel with the best wall time of each backend and the speedup.
"""
import argparse
import time

import numpy as np

from diophant.kernels import get_backend


def _inputs(rng, n_points=20000, n_vars=4, degree=6, n_terms=60):
    exps = rng.multinomial(degree, [1 / n_vars] * n_vars, size=n_terms).astype(np.int64)
    coeffs = (rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)).astype(np.complex128)
    pts = (rng.normal(size=(n_points, n_vars)) + 1j * rng.normal(size=(n_points, n_vars)))
    return exps, coeffs, pts.astype(np.complex128)


def _bases(rng, n_cand=64, k=2, n_vars=4):
    out = np.empty((n_cand, k, n_vars), dtype=np.complex128)
    for c in range(n_cand):
        q, _ = np.linalg.qr(rng.normal(size=(n_vars, k)))
        out[c] = q.T
    return out


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=20000)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(7)
    exps, coeffs, pts = _inputs(rng, args.points)
    bases = _bases(rng)
    # threshold 0 disables the early exit so both backends do the full scan
    cases = {
        "poly_eval": lambda b: b.poly_eval(exps, coeffs, pts),
        "poly_eval_grad": lambda b: b.poly_eval_grad(exps, coeffs, pts),
        "log_abs_sums": lambda b: b.log_abs_sums(exps, coeffs, pts),
        "min_subspace_distance": lambda b: b.min_subspace_distance(bases, pts, 0.0),
    }
    try:
        cy = get_backend("cython")
    except ImportError:
        print("compiled backend not built; only the fallback is available")
        cy = None
    py = get_backend("python")
    print(f"{'kernel':<24}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, call in cases.items():
        tp = best_time(lambda: call(py), args.repeat)
        if cy is None:
            print(f"{name:<24}{tp:>12.4f}{'-':>12}{'-':>10}")
            continue
        tc = best_time(lambda: call(cy), args.repeat)
        print(f"{name:<24}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
