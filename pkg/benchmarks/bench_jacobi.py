"""Compare the compiled and pure-Python Jacobi kernels.

    python3 benchmarks/bench_jacobi.py [--repeat 5]

Times batches of random Hermitian matrices at the sizes the package uses
(2x2 frame densities, 4x4 two-mode states, 41x41 and 64x64 Fock densities)
and reports the agreement between the two backends.
"""
import argparse
import time

import numpy as np

from catcode import _jacobi_py

try:
    from catcode import _jacobi
except ImportError:
    _jacobi = None

CASES = ((2, 20000), (4, 5000), (41, 8), (64, 4))


def random_hermitian(rng, k, n):
    a = rng.normal(size=(k, n, n)) + 1j * rng.normal(size=(k, n, n))
    return (a + np.conj(np.swapaxes(a, 1, 2))) / 2


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'n':>4} {'batch':>6} {'python s':>10} {'compiled s':>11} {'speedup':>8} {'max |dw|':>10}")
    for n, k in CASES:
        a = random_hermitian(rng, k, n)
        t_py, (w_py, _, _) = best_time(lambda: _jacobi_py.eigh_batch(a), args.repeat)
        if _jacobi is None:
            print(f"{n:4d} {k:6d} {t_py:10.4f} {'n/a':>11} {'n/a':>8} {'n/a':>10}")
            continue
        t_c, (w_c, _, _) = best_time(lambda: _jacobi.eigh_batch(a), args.repeat)
        dw = np.abs(w_py - w_c).max()
        print(f"{n:4d} {k:6d} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:8.1f} {dw:10.1e}")


if __name__ == "__main__":
    main()
