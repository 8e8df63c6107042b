"""Exact modal propagation agrees with RK4 and rejects defective generators."""

import types

import numpy as np
import pytest

from atompair import (
    KET_GG,
    CouplingParams,
    DriveParams,
    Geometry,
    build_liouvillian,
    evolve,
    pure_density,
)
from atompair._modal import ModalDecompositionError, ModalPropagator
from atompair.states import vec


def test_modal_matches_rk4_trajectory():
    coupling = CouplingParams(phi=0.5)
    drive = DriveParams(omega=0.73, delta=5.39, geometry=Geometry.ANTISYMMETRIC)
    liouv = build_liouvillian(drive, coupling)
    modal = ModalPropagator.from_liouvillian(liouv)

    rho0 = pure_density(KET_GG)
    times = np.linspace(0.0, 8.0, 9)
    traj = evolve(rho0, liouv, 8.0, sample_times=times)
    for i, t in enumerate(times):
        assert np.abs(modal.state_at(vec(rho0), t) - traj.states[i]).max() < 1e-9


def test_modal_populations_match_states():
    coupling = CouplingParams(phi=0.2)
    drive = DriveParams(omega=19.0, delta=-93.0)
    liouv = build_liouvillian(drive, coupling)
    modal = ModalPropagator.from_liouvillian(liouv)
    v0 = vec(pure_density(KET_GG))
    times = np.linspace(0.0, 0.5, 64)
    pops = modal.populations_at(v0, times)
    assert pops.shape == (64, 4)
    assert np.abs(pops.sum(axis=1) - 1.0).max() < 1e-9
    from atompair import dicke_populations

    probe = 17
    direct = dicke_populations(modal.state_at(v0, times[probe]))
    assert pops[probe] == pytest.approx(tuple(direct), abs=1e-12)


def test_rejects_defective_generator():
    # a Jordan block has no eigenbasis; the decomposition must refuse it
    jordan = np.zeros((16, 16), dtype=complex)
    for k in range(15):
        jordan[k, k + 1] = 1.0
    fake = types.SimpleNamespace(matrix=jordan)
    with pytest.raises(ModalDecompositionError):
        ModalPropagator.from_liouvillian(fake)
