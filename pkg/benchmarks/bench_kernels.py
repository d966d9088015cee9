"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--n1 400] [--n2 400] [--repeat 5]

The same workloads run on both backends (when numba is importable), so the
table shows exactly what PSPIN_NO_NUMBA=1 costs.
"""

import argparse
import time

import numpy as np

from pspin.kernels import _numpy as np_impl
from pspin.patterns import generate

try:
    from pspin.kernels import _numba as nb_impl
except ImportError:
    nb_impl = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads(impl, xi, p):
    n1 = xi.n1
    cols = xi.cols()
    sigma_state = xi.row_state(0)
    m0 = impl.overlaps(xi.words, sigma_state.words, n1)
    rng = np.random.default_rng(0)
    order = rng.permutation(n1).astype(np.int64)

    def bench_overlaps():
        for _ in range(200):
            impl.overlaps(xi.words, sigma_state.words, n1)

    def bench_delta_all():
        m = m0.copy()
        spins = sigma_state.to_pm1()
        for _ in range(50):
            impl.delta_raw_all(m, cols, spins, p)

    def bench_sweeps():
        m = m0.copy()
        spins = sigma_state.to_pm1()
        for _ in range(20):
            impl.sweep_flips(m, cols, spins, order, p, 0.0)

    def bench_batch():
        masks = rng.integers(0, 2 ** 64, size=(256, xi.words.shape[1]), dtype=np.uint64)
        impl.batch_abs_pow_sums(xi.words, masks, n1, p)

    return {
        "overlaps x200": bench_overlaps,
        "delta_raw_all x50": bench_delta_all,
        "sweep_flips x20": bench_sweeps,
        "batch_sums k=256": bench_batch,
    }


def bench_all_states(impl, p):
    xi = generate(16, 4, 3)

    def run():
        impl.all_states_lm_mask(xi.cols(), p, 0.0, False)

    return run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n1", type=int, default=400)
    parser.add_argument("--n2", type=int, default=400)
    parser.add_argument("--p", type=float, default=2.0)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    xi = generate(args.n1, args.n2, 1)
    print(f"n1={args.n1} n2={args.n2} p={args.p} repeat={args.repeat}")
    if nb_impl is None:
        print("numba unavailable; timing numpy backend only")

    rows = []
    numpy_work = workloads(np_impl, xi, args.p)
    numpy_work["all_states n1=16"] = bench_all_states(np_impl, args.p)
    if nb_impl is not None:
        numba_work = workloads(nb_impl, xi, args.p)
        numba_work["all_states n1=16"] = bench_all_states(nb_impl, args.p)
        for fn in numba_work.values():  # JIT warmup outside timing
            fn()
    for name, fn in numpy_work.items():
        t_np = timeit(fn, args.repeat)
        if nb_impl is not None:
            t_nb = timeit(numba_work[name], args.repeat)
            rows.append((name, t_np, t_nb, t_np / t_nb))
        else:
            rows.append((name, t_np, None, None))

    header = f"{'workload':<22} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, t_np, t_nb, speedup in rows:
        if t_nb is None:
            print(f"{name:<22} {t_np:>12.5f} {'-':>12} {'-':>9}")
        else:
            print(f"{name:<22} {t_np:>12.5f} {t_nb:>12.5f} {speedup:>8.1f}x")


if __name__ == "__main__":
    main()
