# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled RK4 kernel for dv/dt = L v with a constant complex matrix L.

Hot loop of every trajectory computation; the pure-Python fallback with the
same contract lives in ``_kernel_py.py``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def propagate_samples(
    cnp.complex128_t[:, ::1] lmat not None,
    cnp.complex128_t[::1] v0 not None,
    cnp.int64_t[::1] seg_steps not None,
    cnp.float64_t[::1] seg_h not None,
):
    """Propagate through consecutive segments, recording the state after each.

    ``seg_steps[i]`` RK4 steps of size ``seg_h[i]`` are taken for segment i
    (zero steps records the current state unchanged).  Returns an array of
    shape ``(len(seg_steps), len(v0))``.
    """
    cdef Py_ssize_t dim = v0.shape[0]
    cdef Py_ssize_t nseg = seg_steps.shape[0]
    if lmat.shape[0] != dim or lmat.shape[1] != dim:
        raise ValueError("matrix/vector dimension mismatch")
    if seg_h.shape[0] != nseg:
        raise ValueError("seg_steps and seg_h must have equal length")

    out_arr = np.empty((nseg, dim), dtype=np.complex128)
    v_arr = np.array(v0, dtype=np.complex128)
    k1_arr = np.empty(dim, dtype=np.complex128)
    k2_arr = np.empty(dim, dtype=np.complex128)
    k3_arr = np.empty(dim, dtype=np.complex128)
    k4_arr = np.empty(dim, dtype=np.complex128)
    w_arr = np.empty(dim, dtype=np.complex128)

    cdef cnp.complex128_t[:, ::1] out = out_arr
    cdef cnp.complex128_t[::1] v = v_arr
    cdef cnp.complex128_t[::1] k1 = k1_arr
    cdef cnp.complex128_t[::1] k2 = k2_arr
    cdef cnp.complex128_t[::1] k3 = k3_arr
    cdef cnp.complex128_t[::1] k4 = k4_arr
    cdef cnp.complex128_t[::1] w = w_arr

    cdef Py_ssize_t i, s, r, c
    cdef long n
    cdef double h, half_h, sixth_h
    cdef double complex acc

    with nogil:
        for i in range(nseg):
            n = seg_steps[i]
            h = seg_h[i]
            half_h = 0.5 * h
            sixth_h = h / 6.0
            for s in range(n):
                for r in range(dim):
                    acc = 0
                    for c in range(dim):
                        acc = acc + lmat[r, c] * v[c]
                    k1[r] = acc
                for r in range(dim):
                    w[r] = v[r] + half_h * k1[r]
                for r in range(dim):
                    acc = 0
                    for c in range(dim):
                        acc = acc + lmat[r, c] * w[c]
                    k2[r] = acc
                for r in range(dim):
                    w[r] = v[r] + half_h * k2[r]
                for r in range(dim):
                    acc = 0
                    for c in range(dim):
                        acc = acc + lmat[r, c] * w[c]
                    k3[r] = acc
                for r in range(dim):
                    w[r] = v[r] + h * k3[r]
                for r in range(dim):
                    acc = 0
                    for c in range(dim):
                        acc = acc + lmat[r, c] * w[c]
                    k4[r] = acc
                for r in range(dim):
                    v[r] = v[r] + sixth_h * (k1[r] + 2.0 * (k2[r] + k3[r]) + k4[r])
            for r in range(dim):
                out[i, r] = v[r]

    return out_arr
