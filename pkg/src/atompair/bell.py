"""Bell-inequality analysis of two-atom states.

The test statistic is the three-angle combination

    P_diff(0, 2pi/3) + P_diff(2pi/3, -2pi/3) + P_diff(0, -2pi/3)

where P_diff(a1, a2) is the probability that z-measurements of the two spins
disagree after atom 1 is rotated by a1 and atom 2 by a2 about a common axis.
Local classical models give values >= 1; the pure antisymmetric (singlet)
state gives 0.75, the maximally mixed state 1.5.  States produced in the
symmetric geometry are first mapped onto the antisymmetric form by a 180
degree z-rotation of one atom.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._parallel import map_ordered
from .coupling import DEFAULT_TRANSITION, CouplingParams, TransitionType
from .design import HORIZON_PERIODS, SaturationHierarchyWarning, optimal_pulse
from .errors import AtomPairError
from .evolve import DEFAULT_SETTINGS, IntegratorSettings
from .liouville import Geometry
from .states import ID2, SIGMA_X, SIGMA_Y, SIGMA_Z, atom_op


class RotationAxis(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"


_AXIS_MATRIX = {
    RotationAxis.X: SIGMA_X,
    RotationAxis.Y: SIGMA_Y,
    RotationAxis.Z: SIGMA_Z,
}

#: The three (angle1, angle2) pairs of the inequality, in radians.
BELL_ANGLE_PAIRS = (
    (0.0, 2.0 * math.pi / 3.0),
    (2.0 * math.pi / 3.0, -2.0 * math.pi / 3.0),
    (0.0, -2.0 * math.pi / 3.0),
)

#: Local-classical bound on the inequality's left-hand side.
CLASSICAL_BOUND = 1.0


def rotation_unitary(axis: RotationAxis, angle: float) -> np.ndarray:
    """Single-spin rotation exp(-i angle sigma_axis / 2)."""
    sigma = _AXIS_MATRIX[axis]
    return math.cos(0.5 * angle) * ID2 - 1j * math.sin(0.5 * angle) * sigma


def local_rotation(
    rho: np.ndarray, atom: int, axis: RotationAxis, angle: float
) -> np.ndarray:
    """Rotate one atom of the pair; unitary, so trace and spectrum survive."""
    u = atom_op(rotation_unitary(axis, angle), atom)
    return u @ np.asarray(rho, dtype=complex) @ u.conj().T


def p_diff(
    rho: np.ndarray,
    angle1: float,
    angle2: float,
    axis: RotationAxis = RotationAxis.X,
) -> float:
    """Probability of opposite z-measurement outcomes after local rotations.

    Atom 1 is rotated by ``angle1`` and atom 2 by ``angle2`` about ``axis``;
    the result is the total population of |eg> and |ge> afterwards.
    """
    rotated = local_rotation(rho, 1, axis, angle1)
    rotated = local_rotation(rotated, 2, axis, angle2)
    return float(rotated[1, 1].real + rotated[2, 2].real)


@dataclass(frozen=True)
class BellResult:
    """Left-hand side of the inequality and its three constituents."""

    lhs: float
    p_diffs: tuple[float, float, float]

    @property
    def violated(self) -> bool:
        return self.lhs < CLASSICAL_BOUND


def bell_lhs(
    rho: np.ndarray,
    geometry: Geometry,
    axis: RotationAxis = RotationAxis.X,
) -> BellResult:
    """Evaluate the inequality on a state produced in the given geometry.

    For the symmetric geometry the state is first converted to antisymmetric
    form by a 180 degree z-rotation of atom 1.  All three correlation terms
    are measured about the same axis (X by default; for the singlet the
    choice is immaterial).
    """
    rho = np.asarray(rho, dtype=complex)
    if geometry is Geometry.SYMMETRIC:
        rho = local_rotation(rho, 1, RotationAxis.Z, math.pi)
    values = tuple(p_diff(rho, a1, a2, axis) for a1, a2 in BELL_ANGLE_PAIRS)
    return BellResult(lhs=float(sum(values)), p_diffs=values)


@dataclass(frozen=True)
class BellPoint:
    """One row of a Bell-value-versus-distance scan."""

    phi: float
    lhs: float
    p_diffs: tuple[float, float, float]
    violated: bool
    error: str | None = None


def _bell_one(args) -> BellPoint:
    phi, geometry, transition, settings, horizon_periods, axis = args
    try:
        coupling = CouplingParams(phi=phi, transition=transition)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SaturationHierarchyWarning)
            pulse = optimal_pulse(
                coupling, geometry, settings, horizon_periods=horizon_periods
            )
        result = bell_lhs(pulse.final_state, geometry, axis)
    except (AtomPairError, ValueError) as exc:
        nan = math.nan
        return BellPoint(
            phi=phi, lhs=nan, p_diffs=(nan, nan, nan), violated=False, error=str(exc)
        )
    return BellPoint(
        phi=phi, lhs=result.lhs, p_diffs=result.p_diffs, violated=result.violated
    )


def bell_scan(
    phis,
    geometry: Geometry,
    transition: TransitionType = DEFAULT_TRANSITION,
    settings: IntegratorSettings = DEFAULT_SETTINGS,
    *,
    horizon_periods: float = HORIZON_PERIODS,
    axis: RotationAxis = RotationAxis.X,
    jobs: int = 1,
) -> list[BellPoint]:
    """Bell value of the optimal-pulse state at each distance in ``phis``.

    Same row semantics as :func:`atompair.design.fidelity_scan`.
    """
    tasks = [
        (float(phi), geometry, transition, settings, horizon_periods, axis)
        for phi in phis
    ]
    return map_ordered(_bell_one, tasks, jobs)
