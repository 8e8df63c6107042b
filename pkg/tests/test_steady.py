"""Stationary solutions: null-space solve against the closed form and evolution."""

import numpy as np
import pytest

from atompair import (
    KET_GG,
    CouplingParams,
    DegenerateSteadyStateError,
    DriveParams,
    Geometry,
    PopulationVector,
    build_liouvillian,
    dicke_populations,
    evolve,
    pure_density,
    stationary_populations_analytic,
    steady_state,
)
from atompair.states import vec
from conftest import load_matrix_fixture

# Closed-form stationary populations at (Omega=1, delta=0.5, phi=0.5, dm1),
# frozen from a 40-digit evaluation; the same numbers must come out of the
# null-space solve.
ANALYTIC_REGRESSION = PopulationVector(
    n_e=0.0033681164642852216,
    n_s=0.016840582321426108,
    n_a=0.0033681164642852216,
    n_g=0.9764231847500034,
)

# Stationary Dicke populations for the antisymmetric drive (Omega=1, delta=0,
# phi=0.5), frozen from the validated null-space solve.
ANTI_REGRESSION = PopulationVector(
    n_e=0.00606516877842193,
    n_s=0.0208847702558257,
    n_a=0.00770444572860524,
    n_g=0.965345615237146,
)


def test_undriven_steady_state_is_ground():
    for geometry in Geometry:
        coupling = CouplingParams(phi=0.5)
        liouv = build_liouvillian(DriveParams(omega=0.0, delta=0.0, geometry=geometry), coupling)
        rho = steady_state(liouv)
        assert np.abs(rho - pure_density(KET_GG)).max() < 1e-12


def test_symmetric_steady_state_matches_closed_form():
    coupling = CouplingParams(phi=0.5)
    liouv = build_liouvillian(DriveParams(omega=1.0, delta=0.0), coupling)
    numeric = dicke_populations(steady_state(liouv))
    analytic = stationary_populations_analytic(1.0, 0.0, coupling)
    assert numeric == pytest.approx(analytic, abs=1e-8)


def test_residual_is_small():
    coupling = CouplingParams(phi=0.5)
    liouv = build_liouvillian(DriveParams(omega=2.0, delta=-3.0), coupling)
    rho = steady_state(liouv)
    assert np.linalg.norm(liouv.matrix @ vec(rho)) < 1e-10


def test_oracle_equivalence_grid():
    # symmetric drive: null-space solve equals the closed form elementwise
    for phi in (0.3, 0.5, 1.0, 2.0):
        coupling = CouplingParams(phi=phi)
        for omega in (0.1, 1.7, 5.0):
            for delta in (-10.0, 0.5, 10.0):
                liouv = build_liouvillian(DriveParams(omega=omega, delta=delta), coupling)
                numeric = dicke_populations(steady_state(liouv))
                analytic = stationary_populations_analytic(omega, delta, coupling)
                assert numeric == pytest.approx(analytic, abs=1e-9), (phi, omega, delta)


def test_analytic_regression_values():
    coupling = CouplingParams(phi=0.5)
    pops = stationary_populations_analytic(1.0, 0.5, coupling)
    assert pops == pytest.approx(ANALYTIC_REGRESSION, abs=1e-14)
    liouv = build_liouvillian(DriveParams(omega=1.0, delta=0.5), coupling)
    assert dicke_populations(steady_state(liouv)) == pytest.approx(
        ANALYTIC_REGRESSION, abs=1e-8
    )


def test_analytic_zero_drive():
    pops = stationary_populations_analytic(0.0, 3.7, CouplingParams(phi=0.5))
    assert pops == (0.0, 0.0, 0.0, 1.0)


def test_analytic_excited_populations_equal():
    for phi in (0.3, 1.0):
        coupling = CouplingParams(phi=phi)
        for omega, delta in ((0.5, -2.0), (3.0, 0.7)):
            pops = stationary_populations_analytic(omega, delta, coupling)
            assert pops.n_e == pops.n_a


def test_antisymmetric_regression_and_evolution_crosscheck():
    coupling = CouplingParams(phi=0.5)
    drive = DriveParams(omega=1.0, delta=0.0, geometry=Geometry.ANTISYMMETRIC)
    liouv = build_liouvillian(drive, coupling)
    rho = steady_state(liouv)
    assert dicke_populations(rho) == pytest.approx(ANTI_REGRESSION, abs=1e-10)
    stored = load_matrix_fixture("steady_anti_omega1_phi05.csv")
    assert np.abs(rho - stored).max() < 1e-12
    # the slowest relaxation rate is gamma_minus ~ 0.049, so by t = 50 the
    # evolution sits within ~e^{-2.5} of its asymptote
    traj = evolve(pure_density(KET_GG), liouv, 50.0, samples=11)
    assert np.abs(np.array(traj.populations[-1]) - np.array(ANTI_REGRESSION)).max() < 1e-3


def test_degenerate_at_guard_distance():
    # at phi = 1e-3 the subradiant rate is ~2e-7 gamma while |chi| ~ 1.5e9,
    # pushing the stationary system past the condition threshold
    coupling = CouplingParams(phi=1e-3)
    drive = DriveParams(omega=1.0, delta=0.0, geometry=Geometry.ANTISYMMETRIC)
    liouv = build_liouvillian(drive, coupling)
    with pytest.raises(DegenerateSteadyStateError) as err:
        steady_state(liouv)
    assert err.value.condition_number is None or err.value.condition_number > 1e12
