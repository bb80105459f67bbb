"""Timing comparison of the compiled and pure-python condition kernels.

Both backends compute per-pair condition slacks and minimal coordinate
ratios on random finite instances.  The script times each on identical
inputs, checks bitwise agreement as it goes, and prints one row per
problem size.

Run from a checkout with the extension built:

    python benchmarks/bench_kernels.py --repeats 5
"""

import argparse
import time

import numpy as np

from conefix.kernels import _fallback

try:
    from conefix.kernels import _core
except ImportError:
    _core = None

FAMILY_NAMES = {
    0: "jungck", 1: "kannan", 2: "chatterjea", 3: "singh-classic",
    4: "singh-printed", 5: "branch", 6: "branch-max", 7: "weak", 8: "cross-weak",
}


def random_instance(rng, n, m):
    pts = rng.uniform(-1.0, 1.0, size=(n, 2))
    base = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    scale = rng.uniform(0.2, 2.0, size=m)
    table = np.ascontiguousarray(scale[None, None, :] * base[:, :, None])
    t_img = rng.integers(0, n, size=n)
    s_img = t_img[t_img]
    return table, s_img.astype(np.int64), t_img.astype(np.int64)


def time_backend(impl, table, s_img, t_img, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        for fam in range(9):
            impl.condition_slacks(table, s_img, t_img, fam, 0.4, 0.1, 0.1)
        for fam in (0, 1, 2, 6):
            impl.minimal_ratios(table, s_img, t_img, fam)
        best = min(best, time.perf_counter() - start)
    return best


def check_parity(table, s_img, t_img):
    for fam in range(9):
        a = _fallback.condition_slacks(table, s_img, t_img, fam, 0.4, 0.1, 0.1)
        b = _core.condition_slacks(table, s_img, t_img, fam, 0.4, 0.1, 0.1)
        if not np.array_equal(a, b):
            raise AssertionError(f"slack mismatch, family {FAMILY_NAMES[fam]}")
    for fam in (0, 1, 2, 6):
        a = _fallback.minimal_ratios(table, s_img, t_img, fam)
        b = _core.minimal_ratios(table, s_img, t_img, fam)
        if not np.array_equal(np.asarray(a), np.asarray(b)):
            raise AssertionError(f"ratio mismatch, family {FAMILY_NAMES[fam]}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--sizes", type=int, nargs="+", default=[8, 16, 32, 64, 128]
    )
    parser.add_argument("--dim", type=int, default=3)
    args = parser.parse_args()

    if _core is None:
        print("compiled backend not built; showing the python backend alone")

    rng = np.random.default_rng(args.seed)
    header = f"{'n':>5} {'m':>3} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        table, s_img, t_img = random_instance(rng, n, args.dim)
        t_py = time_backend(_fallback, table, s_img, t_img, args.repeats)
        if _core is None:
            print(f"{n:>5} {args.dim:>3} {t_py * 1e3:>10.3f}ms {'-':>12} {'-':>9}")
            continue
        check_parity(table, s_img, t_img)
        t_cy = time_backend(_core, table, s_img, t_img, args.repeats)
        print(
            f"{n:>5} {args.dim:>3} {t_py * 1e3:>10.3f}ms "
            f"{t_cy * 1e3:>10.3f}ms {t_py / t_cy:>8.1f}x"
        )
    if _core is not None:
        print("bitwise parity verified on every timed input")


if __name__ == "__main__":
    main()
