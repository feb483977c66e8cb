"""Timing comparison of the compiled and reference K^2 kernels.

The kernel is the inner loop of interpolation-norm quadrature: one K^2
evaluation per node per refinement pass. Run:

    python3 benchmarks/bench_kernels.py --modes 4096 --points 2049
"""
import argparse
import time

import numpy as np

from fracspace._kernels import _ref

try:
    from fracspace._kernels import _fast
except ImportError:
    _fast = None


def _time(fn, lam, c2, ts, repeats: int) -> float:
    fn(lam, c2, ts)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(lam, c2, ts)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--modes", type=int, default=4096)
    ap.add_argument("--points", type=int, default=2049)
    ap.add_argument("--repeats", type=int, default=7)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    j = np.arange(1, args.modes + 1, dtype=np.float64)
    lam = (j * np.pi) ** 2
    c2 = (j**-1.5 * rng.uniform(-1.0, 1.0, args.modes)) ** 2
    ts = np.geomspace(1e-6, 1e6, args.points)

    t_ref = _time(_ref.k2_batch, lam, c2, ts, args.repeats)
    print(f"reference: {t_ref * 1e3:9.3f} ms  ({args.modes} modes x {args.points} t)")
    if _fast is None:
        print("compiled backend unavailable; build the extension to compare")
        return 0
    t_fast = _time(_fast.k2_batch, lam, c2, ts, args.repeats)
    out_r = _ref.k2_batch(lam, c2, ts)
    out_f = _fast.k2_batch(lam, c2, ts)
    rel = float(np.max(np.abs(out_f - out_r) / np.maximum(np.abs(out_r), 1e-300)))
    print(f"compiled:  {t_fast * 1e3:9.3f} ms")
    print(f"speedup:   {t_ref / t_fast:9.2f}x   max rel diff {rel:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
