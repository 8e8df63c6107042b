"""Effective Hamiltonian, master-equation generator, and stationary solutions.

The two driven atoms evolve under (hbar = 1, rotating frame of the laser)

    drho/dt = -i [H, rho]
              + sum_ij gamma_ij/2 (2 sm_i rho sp_j - sp_j sm_i rho - rho sp_j sm_i)

with H = 1/2 [-delta (sz_1 + sz_2) + Omega_1 sp_1 + Omega_2 sp_2
              + chi sp_1 sm_2 + h.c.]
(the Hermitian detuning term appears once) and the collective decay matrix
gamma_ij = {{gamma, g gamma}, {g gamma, gamma}}.  The generator is assembled
as a 16x16 matrix acting on column-stacked density matrices.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .coupling import CouplingParams
from .errors import DegenerateSteadyStateError
from .states import (
    ID4,
    SM1,
    SM2,
    SP1,
    SP2,
    SZ1,
    SZ2,
    TRACE_VECTOR,
    PopulationVector,
    unvec,
    validate_density_matrix,
)


class Geometry(enum.Enum):
    """Laser beam orientation relative to the interatomic axis.

    Symmetric: beam perpendicular, both atoms see the same phase.
    Antisymmetric: beam parallel, atom 2 lags by the propagation phase phi.
    """

    SYMMETRIC = "sym"
    ANTISYMMETRIC = "anti"


@dataclass(frozen=True)
class DriveParams:
    """Laser drive: Rabi magnitude, detuning, excitation geometry.

    ``omega`` is the (real, non-negative) Rabi magnitude and ``delta`` the
    laser detuning from the atomic transition, both in units of gamma.
    """

    omega: float
    delta: float
    geometry: Geometry = Geometry.SYMMETRIC

    def __post_init__(self) -> None:
        if not (self.omega >= 0.0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be >= 0 and finite, got {self.omega!r}")
        if not math.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta!r}")


def rabi_pair(drive: DriveParams, coupling: CouplingParams) -> tuple[complex, complex]:
    """Per-atom complex Rabi frequencies (Omega_1, Omega_2)."""
    if drive.geometry is Geometry.SYMMETRIC:
        return complex(drive.omega), complex(drive.omega)
    return complex(drive.omega), drive.omega * np.exp(-1j * coupling.phi)


def build_hamiltonian(drive: DriveParams, coupling: CouplingParams) -> np.ndarray:
    """Effective Hamiltonian as a 4x4 Hermitian matrix in the product basis."""
    omega1, omega2 = rabi_pair(drive, coupling)
    raising = 0.5 * (omega1 * SP1 + omega2 * SP2 + coupling.chi * (SP1 @ SM2))
    h = -0.5 * drive.delta * (SZ1 + SZ2) + raising + raising.conj().T
    return h


def _dissipator_matrix(coupling: CouplingParams) -> np.ndarray:
    """Collective-decay part of the generator (column-stacking convention)."""
    gmat = coupling.gamma * np.array(
        [[1.0, coupling.g], [coupling.g, 1.0]], dtype=float
    )
    lowering = (SM1, SM2)
    raising = (SP1, SP2)
    d = np.zeros((16, 16), dtype=complex)
    for i in range(2):
        for j in range(2):
            rate = gmat[i, j]
            sm_i, sp_j = lowering[i], raising[j]
            spsm = sp_j @ sm_i
            d += 0.5 * rate * (
                2.0 * np.kron(sp_j.T, sm_i)
                - np.kron(ID4, spsm)
                - np.kron(spsm.T, ID4)
            )
    return d


@dataclass(frozen=True)
class Liouvillian:
    """16x16 generator acting on column-stacked density matrices.

    ``matrix = hamiltonian_part + dissipator_part``.  The building parameters
    are kept around so integrators can bound the fastest frequency present.
    """

    matrix: np.ndarray
    hamiltonian_part: np.ndarray
    dissipator_part: np.ndarray
    drive: DriveParams
    coupling: CouplingParams

    @property
    def omega_max(self) -> float:
        """Largest frequency scale, used to bound the integration step."""
        return max(
            abs(self.drive.delta),
            self.drive.omega,
            abs(self.coupling.chi),
            self.coupling.gamma,
        )


def build_liouvillian(drive: DriveParams, coupling: CouplingParams) -> Liouvillian:
    """Assemble the master-equation generator for the given drive and geometry."""
    if abs(coupling.g) > 1.0:
        raise ValueError(
            f"|g| = {abs(coupling.g):.6g} > 1 makes the collective decay matrix "
            "indefinite; no physical dissipator exists"
        )
    h = build_hamiltonian(drive, coupling)
    lh = -1j * (np.kron(ID4, h) - np.kron(h.T, ID4))
    ld = _dissipator_matrix(coupling)
    return Liouvillian(
        matrix=lh + ld,
        hamiltonian_part=lh,
        dissipator_part=ld,
        drive=drive,
        coupling=coupling,
    )


#: Condition number above which the stationary system is treated as degenerate.
CONDITION_THRESHOLD = 1e12
#: Required residual norm |L vec(rho_ss)| of the returned stationary state.
RESIDUAL_TOL = 1e-10


def steady_state(
    liouv: Liouvillian,
    *,
    condition_threshold: float = CONDITION_THRESHOLD,
    residual_tol: float = RESIDUAL_TOL,
) -> np.ndarray:
    """Unique stationary density matrix of the generator.

    Solves the overdetermined linear system {L vec(rho) = 0, trace(rho) = 1}
    by dense least squares.  Raises :class:`DegenerateSteadyStateError` when
    the stacked system is ill-conditioned (null space effectively degenerate)
    or the residual exceeds ``residual_tol``.
    """
    a = np.vstack([liouv.matrix, TRACE_VECTOR[np.newaxis, :]])
    b = np.zeros(17, dtype=complex)
    b[16] = 1.0
    solution, _, rank, singular_values = np.linalg.lstsq(a, b, rcond=None)
    condition = float(singular_values[0] / singular_values[-1])
    if rank < 16 or not math.isfinite(condition) or condition > condition_threshold:
        raise DegenerateSteadyStateError(
            f"stationary system is degenerate: rank={rank}, "
            f"condition number {condition:.3e} exceeds {condition_threshold:.1e}",
            condition_number=condition,
        )
    residual = float(np.linalg.norm(liouv.matrix @ solution))
    if residual > residual_tol:
        raise DegenerateSteadyStateError(
            f"stationary solve residual {residual:.3e} exceeds {residual_tol:.1e} "
            f"(condition number {condition:.3e})",
            condition_number=condition,
            residual=residual,
        )
    rho = unvec(solution)
    # The exact solution is Hermitian; discard the anti-Hermitian numerical
    # noise before validating against the strict state tolerances.
    rho = 0.5 * (rho + rho.conj().T)
    return validate_density_matrix(rho, context="steady state")


def stationary_populations_analytic(
    omega: float, delta: float, coupling: CouplingParams
) -> PopulationVector:
    """Closed-form stationary Dicke populations under symmetric drive.

    Valid for the symmetric geometry only (Omega_1 = Omega_2 = Omega real).
    With f, g the coupling factors and D the shared denominator

        D = (gamma^2 + 4 delta^2 + 2 Omega^2)^2
            + gamma (gamma^2 + 4 delta^2)
              (f^2 gamma + g^2 gamma + 2 g gamma - 4 f delta)

    the populations are N_e = N_a = Omega^4 / D and
    N_s = Omega^2 (2 gamma^2 + 8 delta^2 + Omega^2) / D.
    """
    gamma = coupling.gamma
    f, g = coupling.f, coupling.g
    omega2 = omega * omega
    gd = gamma * gamma + 4.0 * delta * delta
    denom = (gd + 2.0 * omega2) ** 2 + gamma * gd * (
        f * f * gamma + g * g * gamma + 2.0 * g * gamma - 4.0 * f * delta
    )
    if not (denom > 0.0 and math.isfinite(denom)):
        raise ValueError(
            f"stationary denominator D = {denom!r} is not positive; "
            f"parameters omega={omega}, delta={delta}, phi={coupling.phi} "
            "are outside the physical regime"
        )
    n_e = omega2 * omega2 / denom
    n_s = omega2 * (2.0 * gamma * gamma + 8.0 * delta * delta + omega2) / denom
    n_g = 1.0 - 2.0 * n_e - n_s
    return PopulationVector(n_e=n_e, n_s=n_s, n_a=n_e, n_g=n_g)
