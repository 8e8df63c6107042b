"""Simulation and pulse design for entangling two dipole-coupled atoms.

The package models two identical two-level atoms at a fixed dimensionless
distance phi = k R, coupled by photon exchange and a coherent dipole-dipole
interaction, and driven by a rectangular laser pulse.  It provides:

* exact construction and integration of the driven-dissipative master
  equation (``liouville``, ``evolve``),
* closed-form and numerical stationary states (``liouville``),
* optimal pulse parameters, first-maximum pulse synthesis and fidelity
  scans (``design``),
* Bell-inequality evaluation of the produced states (``bell``),
* a CSV-producing command line front end (``cli``).

Units: gamma = 1 (single-atom decay rate) defines the time unit; hbar = 1.
All frequencies are in units of gamma.
"""

from ._backend import backend_name
from .bell import (
    BELL_ANGLE_PAIRS,
    CLASSICAL_BOUND,
    BellPoint,
    BellResult,
    RotationAxis,
    bell_lhs,
    bell_scan,
    local_rotation,
    p_diff,
)
from .coupling import (
    DEFAULT_TRANSITION,
    PHI_MIN,
    CouplingParams,
    TransitionType,
    coupling_f,
    coupling_g,
)
from .design import (
    FidelityPoint,
    OptimalDrive,
    PulseResult,
    SaturationHierarchyWarning,
    TargetState,
    fidelity_scan,
    optimal_drive,
    optimal_pulse,
)
from .errors import (
    AtomPairError,
    DegenerateSteadyStateError,
    InvariantViolationError,
    NoMaximumError,
    StepBudgetError,
    StepUnderflowError,
)
from .evolve import IntegratorSettings, Trajectory, evolve, step_size
from .liouville import (
    DriveParams,
    Geometry,
    Liouvillian,
    build_hamiltonian,
    build_liouvillian,
    stationary_populations_analytic,
    steady_state,
)
from .states import (
    DICKE_BASIS,
    KET_EE,
    KET_EG,
    KET_GE,
    KET_GG,
    PSI_A,
    PSI_E,
    PSI_G,
    PSI_S,
    PopulationVector,
    dicke_populations,
    maximally_mixed,
    pure_density,
    validate_density_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AtomPairError",
    "BELL_ANGLE_PAIRS",
    "BellPoint",
    "BellResult",
    "CLASSICAL_BOUND",
    "CouplingParams",
    "DEFAULT_TRANSITION",
    "DegenerateSteadyStateError",
    "DICKE_BASIS",
    "DriveParams",
    "FidelityPoint",
    "Geometry",
    "IntegratorSettings",
    "InvariantViolationError",
    "KET_EE",
    "KET_EG",
    "KET_GE",
    "KET_GG",
    "Liouvillian",
    "NoMaximumError",
    "OptimalDrive",
    "PHI_MIN",
    "PopulationVector",
    "PSI_A",
    "PSI_E",
    "PSI_G",
    "PSI_S",
    "PulseResult",
    "RotationAxis",
    "SaturationHierarchyWarning",
    "StepBudgetError",
    "StepUnderflowError",
    "TargetState",
    "Trajectory",
    "TransitionType",
    "backend_name",
    "bell_lhs",
    "bell_scan",
    "build_hamiltonian",
    "build_liouvillian",
    "coupling_f",
    "coupling_g",
    "dicke_populations",
    "evolve",
    "fidelity_scan",
    "local_rotation",
    "maximally_mixed",
    "optimal_drive",
    "optimal_pulse",
    "p_diff",
    "pure_density",
    "stationary_populations_analytic",
    "steady_state",
    "step_size",
    "validate_density_matrix",
    "__version__",
]
