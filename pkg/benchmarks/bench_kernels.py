"""Compare the numba and numpy kernel backends on pipeline-sized inputs.

Each kernel is called once before timing so JIT compilation is excluded.
"""

import argparse
import time

import numpy as np

from repvec.kernels import numba_backend, numpy_backend


def make_cases(rng, n, dim, examples):
    X = rng.standard_normal((n, dim))
    X[: n // 2] += 1.5
    y = np.where(np.arange(n) < n // 2, 1.0, -1.0)
    A = rng.standard_normal((examples, 5))
    D = A[:, 1] + 0.1 * rng.standard_normal(examples)
    start = (np.arange(n) >= n // 2).astype(np.int64)
    return {
        "lloyd2": lambda k: k.lloyd2(X, X[0].copy(), X[-1].copy(), 100, 1e-9),
        "hartigan2": lambda k: k.hartigan2(X, start, 100, 1e-9),
        "smo_linear": lambda k: k.smo_linear(X, y, 1.0, 1e-6, 100 * n * n),
        "medoid_index": lambda k: k.medoid_index(X, X.mean(axis=0)),
        "combiner_loss_grad": lambda k: k.combiner_loss_grad(np.zeros(5), A, D, True),
    }


def time_call(fn, repeats):
    fn()
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--instances", type=int, default=30, help="points per class")
    parser.add_argument("--dim", type=int, default=100)
    parser.add_argument("--examples", type=int, default=3000, help="rows in the weight dataset")
    parser.add_argument("--repeats", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = [("numpy", numpy_backend)]
    try:
        backends.append(("numba", numba_backend()))
    except ImportError:
        print("numba not installed, timing the numpy backend only")

    cases = make_cases(np.random.default_rng(args.seed), args.instances, args.dim, args.examples)
    print(f"instances={args.instances} dim={args.dim} examples={args.examples} repeats={args.repeats}")
    print(f"{'kernel':<20}" + "".join(f"{name:>14}" for name, _ in backends) + f"{'speedup':>10}")
    for label, call in cases.items():
        times = [time_call(lambda k=k: call(k), args.repeats) for _, k in backends]
        row = f"{label:<20}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
