"""Benchmark the compiled rank kernels against the NumPy fallback.

Times raw GF(2) and odd-p rank calls on random matrices, then a full
colength computation, with both backends in the same process (the
dispatch table in hkfractal.gflinalg is swapped around the timed call).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hkfractal import colength, parse_poly
from hkfractal import gflinalg
from hkfractal.gflinalg import pure


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_packed(rng, n: int) -> np.ndarray:
    nwords = (n + 63) >> 6
    packed = rng.integers(0, 2**64, size=(n, nwords), dtype=np.uint64)
    tail = n & 63
    if tail:
        packed[:, -1] &= np.uint64((1 << tail) - 1)
    return packed


def swap_backend(impl):
    previous = (gflinalg.gf2_rank, gflinalg.gfp_rank)
    gflinalg.gf2_rank, gflinalg.gfp_rank = impl
    return previous


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="512,1024,2048,4096",
                    help="GF(2) matrix dimensions, comma separated")
    ap.add_argument("--odd-sizes", default="256,512,1024",
                    help="odd-p matrix dimensions, comma separated")
    ap.add_argument("--p", type=int, default=3, help="odd prime for gfp_rank")
    ap.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    compiled = gflinalg.BACKEND == "speedups"
    if not compiled:
        print("compiled extension not importable; timing the pure backend only")
    backends = [("pure", (pure.gf2_rank, pure.gfp_rank))]
    if compiled:
        backends.insert(0, ("speedups", (gflinalg.gf2_rank, gflinalg.gfp_rank)))

    rng = np.random.default_rng(args.seed)
    header = f"{'dim':>6}  " + "".join(f"{name:>12}" for name, _ in backends)
    if compiled:
        header += f"{'speedup':>10}"

    print(f"GF(2) rank, random dense matrices (best of {args.repeat})")
    print(header)
    for n in [int(s) for s in args.sizes.split(",")]:
        packed = random_packed(rng, n)
        ranks, times = [], []
        for _, (gf2, _) in backends:
            ranks.append(gf2(packed.copy(), n))
            times.append(best_of(lambda g=gf2: g(packed.copy(), n), args.repeat))
        assert len(set(ranks)) == 1, f"backends disagree at dim {n}: {ranks}"
        row = f"{n:>6}  " + "".join(f"{t:>11.4f}s" for t in times)
        if compiled:
            row += f"{times[1] / times[0]:>9.1f}x"
        print(row)

    print(f"\nGF({args.p}) rank, random dense matrices (best of {args.repeat})")
    print(header)
    for n in [int(s) for s in args.odd_sizes.split(",")]:
        mat = rng.integers(0, args.p, size=(n, n), dtype=np.uint8)
        ranks, times = [], []
        for _, (_, gfp) in backends:
            ranks.append(gfp(mat.copy(), args.p))
            times.append(best_of(lambda g=gfp: g(mat.copy(), args.p), args.repeat))
        assert len(set(ranks)) == 1, f"backends disagree at dim {n}: {ranks}"
        row = f"{n:>6}  " + "".join(f"{t:>11.4f}s" for t in times)
        if compiled:
            row += f"{times[1] / times[0]:>9.1f}x"
        print(row)

    f, _ = parse_poly("x^3 + y^3 + x*y*z", 2)
    print(f"\ncolength(x^3+y^3+x*y*z, 2^n-1, n) over F_2 (best of {args.repeat})")
    print(f"{'n':>6}  " + "".join(f"{name:>12}" for name, _ in backends))
    for n in (3, 4):
        times = []
        for _, impl in backends:
            previous = swap_backend(impl)
            try:
                times.append(
                    best_of(lambda: colength(f, 2**n - 1, n), args.repeat)
                )
            finally:
                swap_backend(previous)
        print(f"{n:>6}  " + "".join(f"{t:>11.4f}s" for t in times))


if __name__ == "__main__":
    main()
