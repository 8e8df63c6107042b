"""Compiled and pure-python propagation kernels agree and honor segments."""

import numpy as np
import pytest

from atompair._backend import BACKEND, backend_name
from atompair._kernel_py import propagate_samples as propagate_python

try:
    from atompair._kernel import propagate_samples as propagate_compiled
except ImportError:
    propagate_compiled = None

needs_compiled = pytest.mark.skipif(
    propagate_compiled is None, reason="compiled kernel not built"
)


def _random_generator(rng, dim=16):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    # shift the spectrum so nothing blows up over the test horizon
    return np.ascontiguousarray(a - 2.0 * np.abs(a).max() * np.eye(dim))


def test_backend_name_is_valid():
    assert backend_name() in ("compiled", "python")
    assert backend_name() == BACKEND


def test_zero_step_segments_replicate_state():
    rng = np.random.default_rng(0)
    lmat = _random_generator(rng)
    v0 = rng.normal(size=16) + 1j * rng.normal(size=16)
    out = propagate_python(
        lmat, v0, np.array([0, 0], dtype=np.int64), np.array([0.0, 0.0])
    )
    assert np.array_equal(out[0], v0)
    assert np.array_equal(out[1], v0)


def test_python_kernel_matches_direct_rk4():
    rng = np.random.default_rng(1)
    lmat = _random_generator(rng, dim=4)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    h = 1e-3
    expected = v.copy()
    for _ in range(10):
        k1 = lmat @ expected
        k2 = lmat @ (expected + 0.5 * h * k1)
        k3 = lmat @ (expected + 0.5 * h * k2)
        k4 = lmat @ (expected + h * k3)
        expected = expected + h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)
    out = propagate_python(lmat, v, np.array([10], dtype=np.int64), np.array([h]))
    assert np.abs(out[0] - expected).max() < 1e-15


@needs_compiled
def test_kernels_agree():
    rng = np.random.default_rng(2)
    lmat = _random_generator(rng)
    v0 = rng.normal(size=16) + 1j * rng.normal(size=16)
    seg_steps = np.array([3, 0, 17, 250, 1], dtype=np.int64)
    seg_h = np.array([1e-3, 0.0, 2e-4, 5e-4, 1e-3])
    out_c = propagate_compiled(lmat, v0, seg_steps, seg_h)
    out_p = propagate_python(lmat, v0, seg_steps, seg_h)
    assert np.abs(out_c - out_p).max() < 1e-12


@needs_compiled
def test_compiled_kernel_validates_shapes():
    rng = np.random.default_rng(3)
    lmat = _random_generator(rng)
    with pytest.raises(ValueError):
        propagate_compiled(
            lmat,
            np.zeros(8, dtype=complex),
            np.array([1], dtype=np.int64),
            np.array([1e-3]),
        )
    with pytest.raises(ValueError):
        propagate_compiled(
            lmat,
            np.zeros(16, dtype=complex),
            np.array([1, 2], dtype=np.int64),
            np.array([1e-3]),
        )
