"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --rows 100000 --variables 13 --bands 15
"""
import argparse
import time

import numpy as np

from bandgrid import _kernels_py, kernels
from bandgrid.preprocess import uniform_boundaries

try:
    from bandgrid import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def run(impl, x, y, edges, nb, n_cats, repeat):
    n_vars = x.shape[1]
    width = edges.shape[1]
    ow = np.full(n_cats, 1.0 / len(y))
    bands = kernels.band_indices(x, edges, nb, impl=impl)

    def train():
        scale = np.zeros((n_vars, width))
        outputs = np.zeros((n_vars, width, n_cats))
        kernels.train_rows(bands, y, scale, outputs, 1.0 / len(y), ow, impl=impl)
        return scale, outputs

    scale, outputs = train()
    return {
        "locate": best_of(lambda: kernels.band_indices(x, edges, nb, impl=impl), repeat),
        "train": best_of(train, repeat),
        "score": best_of(lambda: kernels.score_rows(bands, x, scale, outputs, kernels.RATIO, impl=impl), repeat),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=100_000)
    ap.add_argument("--variables", type=int, default=13)
    ap.add_argument("--bands", type=int, default=15)
    ap.add_argument("--categories", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    x = rng.random((args.rows, args.variables))
    y = rng.integers(0, args.categories, size=args.rows).astype(np.intp)
    edges = np.tile(uniform_boundaries(args.bands), (args.variables, 1))
    nb = np.full(args.variables, args.bands, dtype=np.intp)

    impls = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    results = {name: run(impl, x, y, edges, nb, args.categories, args.repeat) for name, impl in impls}
    print(f"{args.rows} rows x {args.variables} variables, {args.bands} bands, {args.categories} categories")
    print(f"{'kernel':8s} " + " ".join(f"{n:>12s}" for n, _ in impls) + ("     speedup" if len(impls) > 1 else ""))
    for k in ("locate", "train", "score"):
        cells = " ".join(f"{results[n][k] * 1e3:10.2f}ms" for n, _ in impls)
        extra = f" {results['python'][k] / results['cython'][k]:10.1f}x" if len(impls) > 1 else ""
        print(f"{k:8s} {cells}{extra}")
    if _kernels_c is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
