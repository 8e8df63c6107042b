"""Distance-dependent collective coupling between two dipole-coupled atoms.

Two identical two-level atoms separated by the dimensionless distance
``phi = k R`` (interatomic distance in units of the reduced transition
wavelength) exchange photons at a rate ``g(phi) * gamma`` and interact
coherently with strength ``chi = f(phi) * gamma``.  The dipole matrix
elements are taken collinear and perpendicular to the interatomic axis;
the transition type (Delta m = 0 or Delta m = +-1, quantization axis along
the interatomic axis) fixes the geometry factors (p, q).

Units: ``gamma = 1`` defines the time unit, ``hbar = 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

#: Smallest allowed dimensionless distance.  Below this the coherent
#: coupling exceeds 1e9 * gamma, the near-field model has no physical
#: validity left, and the f/g evaluations start losing digits to
#: cancellation.
PHI_MIN = 1e-3


class TransitionType(enum.Enum):
    """Atomic transition type, selecting the (p, q) geometry factors."""

    DELTA_M0 = "dm0"
    DELTA_M_PM1 = "dm1"

    @property
    def p(self) -> int:
        return 0 if self is TransitionType.DELTA_M0 else 1

    @property
    def q(self) -> int:
        return 2 if self is TransitionType.DELTA_M0 else -1


#: Delta m = +-1 is the default; the Delta m = 0 case behaves qualitatively
#: the same way.
DEFAULT_TRANSITION = TransitionType.DELTA_M_PM1


def _checked_phi(phi: float) -> float:
    phi = float(phi)
    if not math.isfinite(phi) or phi < PHI_MIN:
        raise ValueError(
            f"dimensionless distance must be finite and >= {PHI_MIN}, got {phi!r}"
        )
    return phi


def coupling_g(phi: float, transition: TransitionType = DEFAULT_TRANSITION) -> float:
    """Photon-exchange (collective decay) factor g(phi).

    g(phi) = (3/2) * [p sin(phi)/phi + q (sin(phi)/phi^3 - cos(phi)/phi^2)]

    The q terms are grouped so their 1/phi^2 singularities cancel, which
    keeps g finite with g -> 1 as phi -> 0 (the small-distance collective
    limit; the antisymmetric state then becomes perfectly subradiant) and
    makes |g| <= 1 for all phi, as required for a positive collective decay
    matrix {{gamma, g gamma}, {g gamma, gamma}}.
    """
    phi = _checked_phi(phi)
    p, q = transition.p, transition.q
    s, c = math.sin(phi), math.cos(phi)
    return 1.5 * (p * s / phi + q * (s / phi**3 - c / phi**2))


def coupling_f(phi: float, transition: TransitionType = DEFAULT_TRANSITION) -> float:
    """Coherent dipole-dipole coupling factor f(phi).

    f(phi) = (3/2) * [p cos(phi)/phi + q cos(phi)/phi^3 + q sin(phi)/phi^2]

    Diverges like (3/2) q / phi^3 at short range, so f (hence chi = f*gamma)
    is negative at small phi for Delta m = +-1 and positive for Delta m = 0.
    """
    phi = _checked_phi(phi)
    p, q = transition.p, transition.q
    s, c = math.sin(phi), math.cos(phi)
    return 1.5 * (p * c / phi + q * c / phi**3 + q * s / phi**2)


@dataclass(frozen=True)
class CouplingParams:
    """Interatomic geometry and the derived collective rates.

    The exchange factor ``g`` and interaction factor ``f`` are always derived
    from ``phi`` and ``transition``; they cannot be set independently.
    """

    phi: float
    transition: TransitionType = DEFAULT_TRANSITION
    gamma: float = 1.0
    g: float = field(init=False)
    f: float = field(init=False)

    def __post_init__(self) -> None:
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma!r}")
        object.__setattr__(self, "phi", _checked_phi(self.phi))
        object.__setattr__(self, "g", coupling_g(self.phi, self.transition))
        object.__setattr__(self, "f", coupling_f(self.phi, self.transition))

    @property
    def chi(self) -> float:
        """Coherent coupling chi = f * gamma (signed, units of gamma)."""
        return self.f * self.gamma

    @property
    def gamma_plus(self) -> float:
        """Superradiant decay rate (1 + g) * gamma of the symmetric state."""
        return (1.0 + self.g) * self.gamma

    @property
    def gamma_minus(self) -> float:
        """Subradiant decay rate (1 - g) * gamma of the antisymmetric state."""
        return (1.0 - self.g) * self.gamma
