"""Benchmark the pairwise phase-space kernel: numba vs pure numpy.

Run with ``python benchmarks/bench_consistency.py [spatial_cap ...]``.
The same enumeration feeds both paths; reported numbers are wall times
for one full row+column sup computation.
"""

import sys
import time

from alphacurvelets._accel import USING_NUMBA
from alphacurvelets.molecules import consistency_sum, enumerate_phase_points
from alphacurvelets.tiling import FrameParams


def main() -> int:
    caps = [float(c) for c in sys.argv[1:]] or [1.0, 2.0, 4.0]
    pa = FrameParams(s=1.0, alpha=0.5, grid_n=64)
    pb = FrameParams(s=0.5, alpha=0.5, grid_n=64)
    if USING_NUMBA:
        # one warm-up call so JIT compilation stays out of the timings
        consistency_sum(pa, pb, 0.5, 3.0, scale_cap=2.0, spatial_cap=0.5)
    print(f"numba available and enabled: {USING_NUMBA}")
    print(f"{'cap':>6} {'points A':>9} {'points B':>9} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8}")
    for cap in caps:
        na = len(enumerate_phase_points(pa, 8.0, cap)[0])
        nb = len(enumerate_phase_points(pb, 8.0, cap)[0])
        t0 = time.perf_counter()
        fast = consistency_sum(pa, pb, 0.5, 3.0, scale_cap=8.0, spatial_cap=cap)
        t1 = time.perf_counter()
        slow = consistency_sum(pa, pb, 0.5, 3.0, scale_cap=8.0, spatial_cap=cap, force_numpy=True)
        t2 = time.perf_counter()
        assert abs(fast.sup_over_a - slow.sup_over_a) <= 1e-9 * slow.sup_over_a
        print(
            f"{cap:6.1f} {na:9d} {nb:9d} {t1 - t0:10.3f} {t2 - t1:10.3f} "
            f"{(t2 - t1) / max(t1 - t0, 1e-9):8.1f}x"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
