import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from kzramp.lzoracle import (LZProblem, TheoryCurve, dilated_time, fit_amplitude, lz_probability,
                             mode_density, mode_integral_constant, theory_density)

SX = np.array([[0, 1], [1, 0]], complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)

# r = 2, delta = 1: DOP853 at rtol 1e-12 from z = -40, frozen before the build
P2_AT_1 = 0.20884594


def _reference(r, delta, cv, z0, rtol=1e-11):
    gy, gz = math.sqrt(1 - cv * cv), cv

    def H(z):
        return 0.5 * (abs(delta * z) ** r * SX - gy * SY - gz * SZ)

    _, vec = np.linalg.eigh(H(z0))
    sol = solve_ivp(lambda z, y: -1j * H(z) @ y, (z0, 0.0), vec[:, 0], method="DOP853",
                    rtol=rtol, atol=1e-13)
    _, vec1 = np.linalg.eigh(H(0.0))
    return float(abs(np.vdot(vec1[:, 1], sol.y[:, -1])) ** 2)


def test_reference_value_r2_delta1():
    assert lz_probability(2.0, 1.0) == pytest.approx(P2_AT_1, abs=1e-6)


@pytest.mark.parametrize("r, delta", [(2.0, 0.5), (2.0, 3.0), (1.0, 1.0), (3.0, 0.8)])
def test_against_adaptive_integrator(r, delta):
    z0 = 2 * LZProblem(r, delta).default_z_min()
    assert lz_probability(r, delta) == pytest.approx(_reference(r, delta, 0.5, z0), abs=1e-4)


def test_adiabatic_and_sudden_limits():
    assert lz_probability(2.0, 0.02) < 1e-5
    assert lz_probability(2.0, 200.0) == pytest.approx(0.5, abs=1e-2)


def test_independent_of_sign_and_direction():
    for delta in (0.3, 1.0, 4.0):
        ref = lz_probability(2.0, delta)
        assert lz_probability(2.0, delta, sign=-1) == pytest.approx(ref, abs=1e-8)
        assert lz_probability(2.0, delta, c_over_v=0.1) == pytest.approx(ref, abs=1e-8)
        assert lz_probability(2.0, delta, c_over_v=0.9) == pytest.approx(ref, abs=1e-8)


def test_probability_in_unit_interval_and_monotone():
    deltas = np.geomspace(0.05, 50, 12)
    p = np.array([lz_probability(2.0, d) for d in deltas])
    assert np.all((p >= 0) & (p <= 1))
    assert np.all(np.diff(p) > 0)


@pytest.mark.parametrize("kw", [dict(delta=0.0), dict(delta=1.0, r=0.0), dict(delta=1.0, sign=0),
                                dict(delta=1.0, c_over_v=1.0)])
def test_problem_validation(kw):
    kw.setdefault("r", 2.0)
    with pytest.raises(ValueError):
        LZProblem(**kw)


def test_constants():
    # linear ramp of g alone: eps ~ eps0 |u|^2 with eps0 = 1/4 from the sine envelope tail
    assert mode_integral_constant(2.0, 0.25) == pytest.approx(0.039, abs=0.005)
    # g and J ramped together double the distance to the critical point
    assert mode_integral_constant(2.0, 0.5) == pytest.approx(0.049, abs=0.006)


def test_mode_density_scaling():
    a = mode_density(2.0, 0.5, 40.0)
    b = mode_density(2.0, 0.5, 80.0)
    assert b / a == pytest.approx(2 ** (-2 / 3), rel=0.01)
    assert a == pytest.approx(mode_integral_constant(2.0, 0.5) * 40.0 ** (-2 / 3), rel=1e-3)


def test_theory_density():
    expect = 0.045 * (4 / 64) ** (2 / 3) * (3 / 4) ** (5 / 6)
    assert theory_density(4.0, 1 / 64, 2.0, 2.0, 0.045) == pytest.approx(expect, rel=1e-14)
    assert theory_density(2.0, 1 / 16, 2.0, 2.0, 0.045) == 0.0
    with pytest.raises(ValueError):
        theory_density(1.5, 1 / 16, 2.0, 2.0, 0.045)
    assert theory_density(1.5, 1 / 16, 2.0, 2.0, 0.045, strict=False) == 0.0
    v = 1e4
    uni = 0.045 * (v / 16) ** (2 / 3)
    assert theory_density(v, 1 / 16, 2.0, 2.0, 0.045) / uni == pytest.approx(1.0, abs=1e-7)
    curve = TheoryCurve(2.0, 1 / 16, 2.0, 0.045)
    np.testing.assert_allclose(curve(np.array([3.0, 5.0])),
                               theory_density(np.array([3.0, 5.0]), 1 / 16, 2.0, 2.0, 0.045))


def test_dilated_time():
    assert dilated_time(1.0, 4.0, 2.0, 2.0) == pytest.approx(0.75 ** (-5 / 4))
    with pytest.raises(ValueError):
        dilated_time(1.0, 2.0, 2.0, 2.0)


def test_fit_amplitude_recovers_constant():
    v = np.linspace(2.6, 8, 9)
    d = theory_density(v, 1 / 32, 2.0, 2.0, 0.047)
    A, res = fit_amplitude(v, d, 1 / 32, 2.0)
    assert A == pytest.approx(0.047, rel=1e-12)
    assert np.abs(res).max() < 1e-12
