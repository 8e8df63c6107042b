"""Compare the compiled RK4 kernel against the pure-numpy fallback.

Runs the same propagation workloads through both kernels and reports wall
times, speedup and the maximum deviation between the two results.  Usage:

    python benchmarks/benchmark_backends.py
"""

import time

import numpy as np

from atompair import CouplingParams, DriveParams, Geometry, build_liouvillian
from atompair._backend import BACKEND
from atompair._kernel_py import propagate_samples as propagate_python
from atompair.states import KET_GG, pure_density, vec

try:
    from atompair._kernel import propagate_samples as propagate_compiled
except ImportError:
    propagate_compiled = None


WORKLOADS = [
    # (label, phi, omega, delta, geometry, n_segments, steps_per_segment, h)
    ("steady approach, phi=0.5", 0.5, 1.0, 0.5, Geometry.SYMMETRIC, 200, 250, 9.28e-4),
    ("stiff pulse, phi=0.1", 0.1, 54.6, -746.3, Geometry.SYMMETRIC, 2000, 8, 6.7e-6),
    ("long subradiant decay, phi=1.0", 1.0, 0.0, 0.0, Geometry.ANTISYMMETRIC, 500, 400, 1e-2),
]


def run(kernel, lmat, v0, segments, steps, h):
    seg_steps = np.full(segments, steps, dtype=np.int64)
    seg_h = np.full(segments, h, dtype=float)
    start = time.perf_counter()
    out = kernel(lmat, v0, seg_steps, seg_h)
    return time.perf_counter() - start, out


def main():
    print(f"active backend: {BACKEND}")
    if propagate_compiled is None:
        print("compiled kernel not available; nothing to compare")
        return
    v0 = vec(pure_density(KET_GG))
    header = f"{'workload':34} {'steps':>9} {'compiled':>10} {'python':>10} {'speedup':>8} {'max |diff|':>11}"
    print(header)
    print("-" * len(header))
    for label, phi, omega, delta, geometry, segments, steps, h in WORKLOADS:
        coupling = CouplingParams(phi=phi)
        drive = DriveParams(omega=omega, delta=delta, geometry=geometry)
        lmat = np.ascontiguousarray(build_liouvillian(drive, coupling).matrix)
        t_c, out_c = run(propagate_compiled, lmat, v0, segments, steps, h)
        t_p, out_p = run(propagate_python, lmat, v0, segments, steps, h)
        diff = float(np.abs(out_c - out_p).max())
        total = segments * steps
        print(
            f"{label:34} {total:>9} {t_c:>9.3f}s {t_p:>9.3f}s {t_p / t_c:>7.1f}x {diff:>11.2e}"
        )


if __name__ == "__main__":
    main()
