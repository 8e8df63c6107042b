"""Exact propagation of the time-independent generator by eigendecomposition.

During a rectangular pulse the generator is constant, so the solution is
rho(t) = V exp(diag(lambda) t) V^-1 rho(0) with (lambda, V) the eigensystem
of the 16x16 generator.  Sampling this is exact at any time and step-size
free, which makes it the right tool for locating pulse maxima at small
distances where the generator is stiff (|chi| up to 1e9 gamma) and the
transfer dynamics are slow.

The decomposition is verified on construction; a defective or ill-conditioned
eigensystem raises, and callers fall back to fixed-step integration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AtomPairError
from .liouville import Liouvillian
from .states import DICKE_PROJECTOR_ROWS, unvec

#: Relative reconstruction residual above which the eigensystem is rejected.
RESIDUAL_TOL = 1e-10
#: Eigenvector-matrix condition number above which sampling is untrusted.
CONDITION_LIMIT = 1e9


class ModalDecompositionError(AtomPairError):
    """The generator's eigensystem is too ill-conditioned for exact sampling."""


@dataclass(frozen=True)
class ModalPropagator:
    """Eigendecomposition L = V diag(eigenvalues) V^-1 of a generator."""

    eigenvalues: np.ndarray
    modes: np.ndarray
    modes_inv: np.ndarray

    @classmethod
    def from_liouvillian(cls, liouv: Liouvillian) -> "ModalPropagator":
        lmat = liouv.matrix
        eigenvalues, modes = np.linalg.eig(lmat)
        condition = float(np.linalg.cond(modes))
        if not np.isfinite(condition) or condition > CONDITION_LIMIT:
            raise ModalDecompositionError(
                f"eigenvector condition number {condition:.3e} exceeds "
                f"{CONDITION_LIMIT:.1e}; generator is too close to defective"
            )
        modes_inv = np.linalg.inv(modes)
        scale = max(1.0, float(np.linalg.norm(lmat)))
        residual = float(
            np.linalg.norm(lmat @ modes - modes * eigenvalues[np.newaxis, :])
        ) / scale
        if residual > RESIDUAL_TOL:
            raise ModalDecompositionError(
                f"eigendecomposition residual {residual:.3e} exceeds "
                f"{RESIDUAL_TOL:.1e}"
            )
        return cls(eigenvalues=eigenvalues, modes=modes, modes_inv=modes_inv)

    def sample_vec(self, v0: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Column-stacked states at the given times, shape (n, 16)."""
        coeff = self.modes_inv @ v0
        phases = np.exp(np.multiply.outer(self.eigenvalues, times))
        return (self.modes @ (phases * coeff[:, np.newaxis])).T

    def populations_at(self, v0: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Dicke populations at the given times, shape (n, 4)."""
        return (self.sample_vec(v0, np.asarray(times, dtype=float))
                @ DICKE_PROJECTOR_ROWS.T).real

    def state_at(self, v0: np.ndarray, t: float) -> np.ndarray:
        """Density matrix at a single time."""
        return unvec(self.sample_vec(v0, np.array([float(t)]))[0])
