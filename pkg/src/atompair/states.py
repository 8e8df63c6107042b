"""Two-atom Hilbert space: product basis, Dicke basis, density-matrix helpers.

Basis conventions (frozen; regression fixtures depend on them):

* single-atom basis order (|e>, |g>),
* product basis order (|ee>, |eg>, |ge>, |gg>) with |eg> = |e>_1 |g>_2,
* Dicke basis (psi_e, psi_s, psi_a, psi_g) with
  psi_a = (|ge> - |eg>) / sqrt(2),
* density matrices vectorized by column stacking.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvariantViolationError

PRODUCT_LABELS = ("ee", "eg", "ge", "gg")

# Single-atom operators in the (|e>, |g>) basis.
ID2 = np.eye(2, dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |e><g|
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |g><e|
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def atom_op(op: np.ndarray, atom: int) -> np.ndarray:
    """Embed a single-atom operator on atom 1 or 2 of the pair."""
    if atom == 1:
        return np.kron(op, ID2)
    if atom == 2:
        return np.kron(ID2, op)
    raise ValueError(f"atom must be 1 or 2, got {atom!r}")


SP1 = atom_op(SIGMA_PLUS, 1)
SP2 = atom_op(SIGMA_PLUS, 2)
SM1 = atom_op(SIGMA_MINUS, 1)
SM2 = atom_op(SIGMA_MINUS, 2)
SZ1 = atom_op(SIGMA_Z, 1)
SZ2 = atom_op(SIGMA_Z, 2)
ID4 = np.eye(4, dtype=complex)

# Product-basis kets.
KET_EE = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
KET_EG = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
KET_GE = np.array([0.0, 0.0, 1.0, 0.0], dtype=complex)
KET_GG = np.array([0.0, 0.0, 0.0, 1.0], dtype=complex)

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# Dicke-basis kets expressed in the product basis.
PSI_E = KET_EE.copy()
PSI_S = _SQRT_HALF * (KET_GE + KET_EG)
PSI_A = _SQRT_HALF * (KET_GE - KET_EG)
PSI_G = KET_GG.copy()

#: Rows are (psi_e, psi_s, psi_a, psi_g); unitary change of basis.
DICKE_BASIS = np.stack([PSI_E, PSI_S, PSI_A, PSI_G])

DICKE_LABELS = ("N_e", "N_s", "N_a", "N_g")


class PopulationVector(NamedTuple):
    """Occupations of the four Dicke states."""

    n_e: float
    n_s: float
    n_a: float
    n_g: float


def pure_density(ket: np.ndarray) -> np.ndarray:
    """Density matrix |ket><ket| of a normalized pure state."""
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def maximally_mixed() -> np.ndarray:
    return np.eye(4, dtype=complex) / 4.0


def dicke_populations(rho: np.ndarray) -> PopulationVector:
    """Diagonal of rho in the Dicke basis, as real occupation probabilities."""
    diag = np.einsum("ki,ij,kj->k", DICKE_BASIS.conj(), rho, DICKE_BASIS)
    return PopulationVector(*(float(x) for x in diag.real))


def dicke_populations_batch(rhos: np.ndarray) -> np.ndarray:
    """Dicke populations for a stack of density matrices, shape (n, 4)."""
    return np.einsum("ki,nij,kj->nk", DICKE_BASIS.conj(), rhos, DICKE_BASIS).real


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization of a 4x4 matrix into a 16-vector."""
    return np.asarray(rho, dtype=complex).reshape(16, order="F").copy()


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v, dtype=complex).reshape((4, 4), order="F").copy()


#: Row vector extracting the trace from a column-stacked 4x4 matrix.
TRACE_VECTOR = vec(ID4)

#: Row k is vec of the transposed projector on Dicke state k, so dotting a
#: column-stacked state with row k gives that state's population.
DICKE_PROJECTOR_ROWS = np.stack(
    [vec(np.outer(psi.conj(), psi)) for psi in DICKE_BASIS]
)

# DensityMatrix validity tolerances.
TRACE_TOL = 1e-10
HERM_TOL = 1e-10
EIG_FLOOR = -1e-9


def validate_density_matrix(
    rho: np.ndarray,
    *,
    trace_tol: float = TRACE_TOL,
    herm_tol: float = HERM_TOL,
    eig_floor: float = EIG_FLOOR,
    context: str = "density matrix",
    time: float | None = None,
) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; raise on violation.

    Returns the array (as complex ndarray) unchanged.  No renormalization is
    performed: a breach means the producer of the state is buggy and must be
    reported, not patched up.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")

    herm_dev = float(np.abs(rho - rho.conj().T).max())
    if herm_dev > herm_tol:
        raise InvariantViolationError(
            f"{context}: Hermiticity deviation {herm_dev:.3e} exceeds {herm_tol:.1e}"
            + (f" at t={time:.6g}" if time is not None else ""),
            time=time,
            metric="hermiticity",
            value=herm_dev,
        )
    trace_dev = abs(complex(np.trace(rho)) - 1.0)
    if trace_dev > trace_tol:
        raise InvariantViolationError(
            f"{context}: trace deviation {trace_dev:.3e} exceeds {trace_tol:.1e}"
            + (f" at t={time:.6g}" if time is not None else ""),
            time=time,
            metric="trace",
            value=trace_dev,
        )
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if min_eig < eig_floor:
        raise InvariantViolationError(
            f"{context}: minimum eigenvalue {min_eig:.3e} below {eig_floor:.1e}"
            + (f" at t={time:.6g}" if time is not None else ""),
            time=time,
            metric="positivity",
            value=min_eig,
        )
    return rho
