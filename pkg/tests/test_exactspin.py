import math

import numpy as np
import pytest

from kzramp import bdg
from kzramp.exactspin import (MAX_SPINS, SpinHamiltonian, SpinLattice2D, evolve_state,
                              ground_state, log_infidelity, majorana_covariance, simulate_spin)
from kzramp.models import ising_chain
from kzramp.schedule import RampDrive


def test_two_spin_ground_energy():
    e0, psi = ground_state(SpinHamiltonian(SpinLattice2D.chain(2)), eps=0.0)
    assert e0 == pytest.approx(-math.sqrt(5), abs=1e-12)
    assert np.linalg.norm(psi) == pytest.approx(1.0)


def test_decoupled_product_state():
    lat = SpinLattice2D(3, 2)
    e0, psi = ground_state(SpinHamiltonian(lat), eps=1.0)  # J = 0, g = 2 g_c
    assert e0 == pytest.approx(-2 * lat.g_c * lat.n, abs=1e-9)
    np.testing.assert_allclose(np.abs(psi) ** 2, 1 / lat.dim, atol=1e-9)


def test_critical_ratio():
    lat = SpinLattice2D(4, 4)
    ham = SpinHamiltonian(lat)
    np.testing.assert_allclose(ham.fields(eps=0.0) / ham.couplings(eps=0.0)[0], 3.04438, rtol=1e-15)


def test_backends_agree_on_3x3():
    ham = SpinHamiltonian(SpinLattice2D(3, 3))
    ea, _ = ground_state(ham, eps=0.0, backend="eigsh")
    eb, _ = ground_state(ham, eps=0.0, backend="lobpcg")
    ec, _ = ground_state(ham, eps=0.0, backend="dense")
    assert ea == pytest.approx(eb, abs=1e-9)
    assert ea == pytest.approx(ec, abs=1e-9)
    with pytest.raises(ValueError):
        ground_state(ham, eps=0.0, backend="power")


def test_hermitian():
    H = SpinHamiltonian(SpinLattice2D(2, 3), RampDrive.inhomogeneous(0.5, 1.0)).dense(0.3)
    np.testing.assert_array_equal(H, H.T)


def test_cap():
    with pytest.raises(ValueError):
        SpinLattice2D(5, 4)
    assert MAX_SPINS == 16


def test_frozen_evolution_is_a_phase():
    ham = SpinHamiltonian(SpinLattice2D(2, 3), RampDrive.uniform(1e12))
    e0, psi = ground_state(ham, 0.0)
    out = evolve_state(psi, ham, 0.0, 3.0, dt=0.05)
    assert abs(np.vdot(psi, out)) == pytest.approx(1.0, abs=1e-9)
    assert np.vdot(psi, out) == pytest.approx(np.exp(-1j * e0 * 3.0), abs=1e-3)
    assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)


def test_log_infidelity():
    psi = np.array([1.0, 0.0], complex)
    assert log_infidelity(psi, 1j * psi, 1) == 0.0
    assert log_infidelity(psi, np.array([0.0, 1.0]), 1) == math.inf
    a = math.exp(-0.5)
    other = np.array([a, math.sqrt(1 - a * a)])
    assert log_infidelity(psi, other, 10) == pytest.approx(0.1)


@pytest.mark.parametrize("drive", [RampDrive.uniform(2.0), RampDrive.inhomogeneous(0.5, 1.5)],
                         ids=["uniform", "inhomogeneous"])
def test_chain_matches_bdg(drive):
    L = 8
    rec, psi, gs = simulate_spin(SpinLattice2D.chain(L), drive, dt=0.02, return_state=True)
    model = ising_chain(L)
    ref = bdg.simulate(model, drive, dt=0.02, fidelity=True)
    assert rec.e == pytest.approx(ref.e, abs=1e-6)
    assert rec.f == pytest.approx(ref.f, abs=1e-6)
    assert rec.tau_total == pytest.approx(ref.tau_total)
    # the Majorana covariance of the spin state reproduces the BdG occupations
    drv = model.bind(drive)
    final = bdg.model_ground_modes(model, drv, model.t_span(drv)[1])
    G = majorana_covariance(psi, L)
    G_gs = majorana_covariance(gs, L)
    np.testing.assert_allclose(G_gs, final.covariance(), atol=1e-8)
    P = final.Q.T @ G @ final.Q
    occ = 0.5 * (1 + np.diag(P[:L, L:]))
    assert occ.mean() == pytest.approx(ref.d, abs=1e-6)


def test_infidelity_tracks_half_the_density():
    # f counts pair excitations: -ln prod(1 - p_pair) / N ~ d / 2 at small d
    L = 12
    drive = RampDrive.uniform(6.0)
    rec = simulate_spin(SpinLattice2D.chain(L), drive)
    ref = bdg.simulate(ising_chain(L), drive)
    assert ref.d < 0.01
    assert rec.f == pytest.approx(ref.d / 2, rel=0.05)


def test_infidelity_decreases_with_ramp_time():
    lat = SpinLattice2D(3, 3)
    f = [simulate_spin(lat, RampDrive.uniform(t), dt=0.05).f for t in (1, 2, 4, 8)]
    assert all(a > b for a, b in zip(f, f[1:]))
    assert all(x >= 0 for x in f)
