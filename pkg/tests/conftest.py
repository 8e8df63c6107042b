"""Shared fixtures and helpers for the test suite."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class CouplingStub:
    """Hand-set collective parameters for limit tests.

    `CouplingParams` always derives g and f from phi, which is what the
    package should do; tests of exact limits (g = 0, g = 1, ...) inject
    values directly through this stand-in instead.
    """

    g: float
    f: float
    phi: float = 1.0
    gamma: float = 1.0

    @property
    def chi(self) -> float:
        return self.f * self.gamma

    @property
    def gamma_plus(self) -> float:
        return (1.0 + self.g) * self.gamma

    @property
    def gamma_minus(self) -> float:
        return (1.0 - self.g) * self.gamma


@pytest.fixture
def coupling_stub():
    return CouplingStub


def load_matrix_fixture(name: str) -> np.ndarray:
    """Read a 4x4 complex matrix stored as re,im rows in row-major order."""
    values = []
    for line in (FIXTURE_DIR / name).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        re_part, im_part = line.split(",")
        values.append(complex(float(re_part), float(im_part)))
    assert len(values) == 16, f"fixture {name} must hold 16 elements"
    return np.array(values, dtype=complex).reshape(4, 4)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """A strictly positive, unit-trace 4x4 density matrix."""
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T + 1e-6 * np.eye(4)
    return rho / np.trace(rho)
