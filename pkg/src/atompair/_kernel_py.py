"""Pure-numpy reference kernel for fixed-step RK4 propagation.

Same contract as the compiled kernel in ``_kernel.pyx``; used when the
extension is not built.
"""

from __future__ import annotations

import numpy as np


def propagate_samples(
    lmat: np.ndarray,
    v0: np.ndarray,
    seg_steps: np.ndarray,
    seg_h: np.ndarray,
) -> np.ndarray:
    """Propagate dv/dt = L v through consecutive segments, recording v after each.

    ``seg_steps[i]`` RK4 steps of size ``seg_h[i]`` are taken for segment i
    (zero steps simply records the current state).  Returns an array of shape
    ``(len(seg_steps), len(v0))``.
    """
    v = np.array(v0, dtype=complex)
    out = np.empty((len(seg_steps), v.size), dtype=complex)
    for i in range(len(seg_steps)):
        n = int(seg_steps[i])
        h = float(seg_h[i])
        for _ in range(n):
            k1 = lmat @ v
            k2 = lmat @ (v + (0.5 * h) * k1)
            k3 = lmat @ (v + (0.5 * h) * k2)
            k4 = lmat @ (v + h * k3)
            v = v + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        out[i] = v
    return out
