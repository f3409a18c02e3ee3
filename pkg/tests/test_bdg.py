import math

import numpy as np
import pytest
from oracles import dense_ising_ramp, ground_state, ising_dense

from kzramp import bdg
from kzramp.bdg import (BogoliubovModes, Propagator, canonical_residual, evolve,
                        excitation_density, excitation_energy, ground_modes,
                        model_ground_modes, occupations, overlap_squared, simulate)
from kzramp.models import build_bdg, ising_chain, kitaev, pwave
from kzramp.schedule import RampDrive


def test_two_site_ground_energy():
    gm = ground_modes(*build_bdg(ising_chain(2), eps=0.0))
    assert gm.ground_energy == pytest.approx(-math.sqrt(5), abs=1e-12)
    assert canonical_residual(gm) < 1e-10


def test_decoupled_sites():
    # eps = 1 in the main binding: J = 0, g = 2
    gm = model_ground_modes(ising_chain(7), eps=1.0)
    np.testing.assert_allclose(gm.energies, 4.0)
    assert gm.ground_energy == pytest.approx(-2.0 * 7)
    gm = model_ground_modes(ising_chain(5, binding="field", g_final=1.0), eps=0.0)
    assert np.all(gm.energies > 0)


@pytest.mark.parametrize("eps", [0.0, 0.4])
def test_ground_energy_matches_dense(eps):
    n = 7
    gm = model_ground_modes(ising_chain(n), eps=eps)
    E0, _ = ground_state(ising_dense(np.full(n, 1 + eps), np.full(n - 1, 1 - eps)))
    assert gm.ground_energy == pytest.approx(E0, abs=1e-10)


def test_rejects_asymmetric_input():
    with pytest.raises(ValueError):
        ground_modes(np.array([[1.0, 2.0], [0.0, 1.0]]), np.zeros((2, 2)))


def test_uv_round_trip_and_inversion():
    gm = model_ground_modes(pwave(3), eps=0.3)
    back = BogoliubovModes.from_uv(gm.U, gm.V)
    np.testing.assert_allclose(back.Q, gm.Q, atol=1e-14)
    assert excitation_density(gm, gm) == pytest.approx(0.0, abs=1e-14)
    assert excitation_density(gm.inverted(), gm) == pytest.approx(1.0, abs=1e-14)
    occ = np.zeros(gm.n)
    assert overlap_squared(gm, gm) == pytest.approx(1.0)
    assert overlap_squared(gm.inverted(), gm) == pytest.approx(0.0, abs=1e-12)
    assert excitation_energy(gm, gm, occ) == 0.0


def test_single_mode_excitation_energy():
    gm = model_ground_modes(ising_chain(6), eps=0.2)
    occ = np.zeros(6)
    occ[2] = 1.0
    assert excitation_energy(gm, gm, occ) == pytest.approx(gm.energies[2] / 6)
    # flipping one Bogoliubov pair of columns occupies exactly that mode
    Q = gm.Q.copy()
    Q[:, 6 + 2] *= -1
    occ = occupations(BogoliubovModes(Q), gm)
    np.testing.assert_allclose(occ, np.eye(6)[2], atol=1e-14)


@pytest.mark.parametrize("model", [ising_chain(10), pwave(4), kitaev(2)], ids=lambda m: m.kind.value)
def test_frozen_hamiltonian_is_stationary(model):
    drive = model.bind(RampDrive.uniform(1.0))
    gm = model_ground_modes(model, drive, 0.3)
    frozen = RampDrive.uniform(1e12)  # eps effectively constant
    gm = model_ground_modes(model, model.bind(frozen), 0.0)
    out = evolve(gm, model, frozen, 0.0, 5.0, dt=0.05)
    assert excitation_density(out, gm) < 1e-9
    E0 = bdg.energy(gm, model, model.bind(frozen), 0.0)
    E1 = bdg.energy(out, model, model.bind(frozen), 5.0)
    assert abs(E1 - E0) < 1e-8 * 5
    assert E0 == pytest.approx(gm.ground_energy, abs=1e-10)


@pytest.mark.parametrize("drive", [RampDrive.uniform(1.3), RampDrive.uniform(4.0),
                                   RampDrive.inhomogeneous(0.5, 1.0),
                                   RampDrive.inhomogeneous(0.25, 3.0)],
                         ids=["uni1.3", "uni4", "inh-sub", "inh-super"])
def test_matches_dense_state_vector(drive):
    L = 8
    d_ref, e_ref, fid_ref = dense_ising_ramp(L, drive)
    rec = simulate(ising_chain(L), drive, dt=0.01, fidelity=True)
    assert rec.d == pytest.approx(d_ref, abs=1e-6)
    assert rec.e == pytest.approx(e_ref, abs=1e-6)
    assert math.exp(-L * rec.f) == pytest.approx(fid_ref, abs=1e-6)
    assert rec.residual < 1e-10


def test_dt_halving_is_fourth_order():
    m = ising_chain(24)
    drive = RampDrive.uniform(3.0)
    d = [simulate(m, drive, dt=h).d for h in (0.2, 0.1, 0.05)]
    e1, e2 = abs(d[0] - d[2]), abs(d[1] - d[2])
    assert e2 < e1 / 8  # ~16 for a clean fourth-order method
    assert e2 < 1e-6


@pytest.mark.parametrize("scheme", bdg.SCHEMES)
def test_schemes_agree(scheme):
    m = ising_chain(12)
    rec = simulate(m, RampDrive.uniform(2.0), dt=0.02, scheme=scheme)
    ref = simulate(m, RampDrive.uniform(2.0), dt=0.01)
    assert rec.d == pytest.approx(ref.d, rel=2e-3 if scheme == "strang2" else 1e-4)


def test_splitting_preserves_orthogonality():
    m = pwave(6)
    drive = m.bind(RampDrive.inhomogeneous(0.3, 2.0))
    t0, t1 = m.t_span(drive)
    Q = Propagator(m, drive, 0.1).run(model_ground_modes(m, drive, t0).Q, t0, t1)
    assert bdg.orthogonality_residual(Q) < 1e-12


def test_constraint_drift_is_reported():
    m = ising_chain(24)
    gm = model_ground_modes(m, RampDrive.uniform(1.0), -np.pi / 2)
    with pytest.raises(bdg.ConstraintDriftError):
        evolve(gm, m, RampDrive.uniform(1.0), -np.pi / 2, np.pi / 2, dt=0.3, scheme="rk4")


def test_deterministic():
    m = pwave(5)
    a = simulate(m, RampDrive.inhomogeneous(0.5, 2.0))
    b = simulate(m, RampDrive.inhomogeneous(0.5, 2.0))
    assert a.d == b.d and a.e == b.e


def test_density_monotone_in_tau():
    m = ising_chain(40)
    d = [simulate(m, RampDrive.uniform(t)).d for t in (1, 2, 4, 8, 16)]
    assert all(x > y for x, y in zip(d, d[1:]))
    assert all(0 <= x <= 1 for x in d)


def test_bad_scheme():
    with pytest.raises(ValueError):
        Propagator(ising_chain(4), RampDrive.uniform(1.0), scheme="euler")
