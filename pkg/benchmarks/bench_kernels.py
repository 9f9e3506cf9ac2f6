"""Compare the compiled and pure-Python F_p row-reduction kernels.

Usage: python3 benchmarks/bench_kernels.py [--sizes 20 60 120] [--repeat 5]
"""

import argparse
import random
import timeit

from linsite import _kernels_py

try:
    from linsite import _kernels
except ImportError:  # pragma: no cover
    _kernels = None


def random_matrix(rng: random.Random, n: int, p: int) -> list:
    return [[rng.randrange(p) for _ in range(n)] for _ in range(n)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 60, 120])
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 101])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    if _kernels is None:
        print("compiled kernel unavailable; build with `pip install -e . --no-build-isolation`")
    print(f"{'p':>5} {'n':>5} {'python ms':>11} {'compiled ms':>12} {'speedup':>8}")
    for p in args.primes:
        for n in args.sizes:
            m = random_matrix(rng, n, p)
            t_py = min(timeit.repeat(lambda: _kernels_py.rref_modp(m, n, p), number=1, repeat=args.repeat))
            if _kernels is None:
                print(f"{p:>5} {n:>5} {t_py * 1e3:>11.2f} {'-':>12} {'-':>8}")
                continue
            assert _kernels.rref_modp(m, n, p) == _kernels_py.rref_modp(m, n, p)
            t_c = min(timeit.repeat(lambda: _kernels.rref_modp(m, n, p), number=1, repeat=args.repeat))
            print(f"{p:>5} {n:>5} {t_py * 1e3:>11.2f} {t_c * 1e3:>12.2f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
