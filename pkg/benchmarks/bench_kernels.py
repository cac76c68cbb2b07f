"""Timing comparison between the compiled counting core and the numpy
fallback. Run directly:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from wavelattice._kernels import (_ref, box_counts, count_in_translated_box,
                                  count_inverse_membership, orbit_box_counts)

try:
    from wavelattice._kernels import _core
except ImportError:
    _core = None


def timed(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_cases(rng):
    pts = rng.uniform(-4, 4, size=(200_000, 2))
    lo = rng.uniform(-3, 1, size=(8, 2))
    hi = lo + rng.uniform(0.2, 2.0, size=(8, 2))

    orbit_pts = rng.uniform(-4, 4, size=(40_000, 2))
    q = np.array([[1.0, 1.0], [1.0, -1.0]])
    mats = np.stack([np.linalg.matrix_power(q, j) for j in range(-4, 5)])

    probe_x = rng.uniform(-10, 10, size=(2_000, 2))
    probe_j = rng.integers(-3, 4, size=2_000)
    probe_T = np.eye(2)[None] + 0.1 * rng.uniform(-1, 1, size=(2_000, 2, 2))
    pt_x = rng.uniform(-10, 10, size=(3_000, 2))
    pt_j = rng.integers(-3, 4, size=3_000)
    pt_T = np.eye(2)[None] + 0.1 * rng.uniform(-1, 1, size=(3_000, 2, 2))
    u_lo = np.full(2, -0.5)
    u_hi = np.full(2, 0.5)

    return [
        ("box_counts  200k pts x 8 boxes",
         lambda impl: box_counts(pts, lo, hi, btol=1e-9, impl=impl)),
        ("orbit_box_counts  40k pts x 9 mats",
         lambda impl: orbit_box_counts(orbit_pts, mats, lo, hi, impl=impl)),
        ("count_in_translated_box  2k x 3k",
         lambda impl: count_in_translated_box(
             probe_x, probe_j, probe_T, pt_x, pt_j, u_lo, u_hi, -2, 2,
             impl=impl)),
        ("count_inverse_membership  2k x 3k",
         lambda impl: count_inverse_membership(
             probe_x, probe_j, pt_x, pt_j, pt_T, u_lo, u_hi, -2, 2,
             impl=impl)),
    ]


def main():
    rng = np.random.default_rng(0)
    cases = make_cases(rng)
    width = max(len(name) for name, _ in cases)
    header = f"{'kernel':<{width}}  {'fallback':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        t_ref = timed(lambda: call(_ref))
        if _core is None:
            print(f"{name:<{width}}  {t_ref * 1e3:>8.2f}ms  {'n/a':>10}  {'n/a':>8}")
            continue
        t_core = timed(lambda: call(_core))
        print(f"{name:<{width}}  {t_ref * 1e3:>8.2f}ms  "
              f"{t_core * 1e3:>8.2f}ms  {t_ref / t_core:>7.1f}x")


if __name__ == "__main__":
    main()
