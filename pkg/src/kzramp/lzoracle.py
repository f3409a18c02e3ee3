"""Nonlinear Landau-Zener sweeps and the supersonic excitation-density curve."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from ._kernels import magnus4_lz

ETA = 1e-5  # initial admixture allowed by the adiabatic start
PHI = 0.02  # phase advance per step at the local splitting
HMAX = 0.05


class LZConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class LZProblem:
    r: float
    delta: float
    sign: int = 1
    c_over_v: float = 0.5
    z_min: float | None = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not 0 <= self.c_over_v < 1:
            raise ValueError("c/v must lie in [0, 1)")

    def default_z_min(self) -> float:
        """Start where the sweep term dominates: |delta z|^(2r+1) ~ r delta / eta."""
        x = max(3.0, (self.delta * self.r / ETA) ** (1.0 / (2 * self.r + 1)))
        return -x / self.delta


def _components(p: LZProblem):
    gam = np.sqrt(1.0 - p.c_over_v ** 2)
    return p.sign * gam, p.sign * p.c_over_v


def lz_probability(r: float, delta: float, sign: int = 1, c_over_v: float = 0.5,
                   tol: float = 1e-6, phi: float = PHI, max_doublings: int = 8,
                   z_min: float | None = None) -> float:
    """Excitation probability p_r(delta) at z = 0, start window doubled until stable."""
    prob = LZProblem(r, delta, sign, c_over_v, z_min)
    sy, sz = _components(prob)
    z0 = prob.z_min if prob.z_min is not None else prob.default_z_min()
    p = magnus4_lz(float(r), float(delta), z0, sy, sz, phi, HMAX)
    for _ in range(max_doublings):
        z0 *= 2.0
        p2 = magnus4_lz(float(r), float(delta), z0, sy, sz, phi, HMAX)
        if abs(p2 - p) < tol:
            return float(min(max(p2, 0.0), 1.0))
        p = p2
    raise LZConvergenceError(f"p_{r}({delta}) not converged after {max_doublings} doublings")


@lru_cache(maxsize=8)
def mode_integral(r: float, tol: float = 1e-7) -> float:
    """K_r = int_0^inf p_r(kappa^{-(r+1)/r}) d kappa."""
    ex = (r + 1.0) / r

    def f(k):
        return 0.5 if k <= 0 else lz_probability(r, k ** (-ex))

    total = 0.0
    for a, b in ((0.0, 1.0), (1.0, 4.0), (4.0, 30.0)):
        val, err = quad(f, a, b, epsabs=tol, limit=200)
        total += val
    # p_r(delta) ~ delta^2 beyond kappa = 30 decays fast; bound the remainder
    tail = f(30.0) * 30.0
    if tail > 1e-3 * total:
        raise LZConvergenceError(f"mode integral tail too large: {tail:.2e}")
    return total


def mode_integral_constant(r: float, eps0: float) -> float:
    """A_r such that int dk/2pi p_r(delta(k)) = A_r tau~^{-r/(1+r)}, where
    delta = eps0^{1/r} |k|^{-(r+1)/r} / (4 tau~) and eps ~ eps0 |t/tau|^r near the end."""
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    return float(4.0 ** (-r / (r + 1)) * eps0 ** (1.0 / (r + 1)) * mode_integral(r) / np.pi)


# near-end amplitudes of the ramps used for the 1D chain: eps ~ (pi/2 - u)^2 / 4
SMOOTH_EPS0 = 0.25


def effective_eps0(binding: str = "main", eps0: float = SMOOTH_EPS0) -> float:
    """Ramping g and J together doubles the distance g/J - 1 ~ 2 eps."""
    return 2.0 * eps0 if binding == "main" else eps0


def mode_density(r: float, eps0: float, tau_tilde: float, tol: float = 1e-7) -> float:
    """Direct integral int dk/2pi p_r(delta(k)) at a given dilated time."""
    c = 0.25 * eps0 ** (1.0 / r) / tau_tilde
    ex = (r + 1.0) / r

    def f(k):
        return 0.5 if k <= 0 else lz_probability(r, c * k ** (-ex))

    scale = tau_tilde ** (-r / (r + 1.0))
    total = sum(quad(f, a * scale, b * scale, epsabs=tol * scale, limit=200)[0]
                for a, b in ((0.0, 1.0), (1.0, 4.0), (4.0, 30.0)))
    return total / np.pi


def dilated_time(tau: float, v: float, c: float, r: float) -> float:
    if v <= c:
        raise ValueError("dilation defined only for v > c")
    return tau * (1.0 - c * c / (v * v)) ** (-(2 * r + 1) / (2 * r))


@dataclass(frozen=True)
class TheoryCurve:
    r: float
    alpha: float
    c: float
    A_r: float

    def __call__(self, v):
        return theory_density(v, self.alpha, self.c, self.r, self.A_r)


def theory_density(v, alpha: float, c: float, r: float, A_r: float, strict: bool = True):
    """d(v) = A_r (alpha v)^{r/(1+r)} (1 - c^2/v^2)^{(2r+1)/(2r+2)} for v > c.

    v = c gives the limit 0; v < c raises unless strict is False (then 0).
    """
    v = np.asarray(v, dtype=float)
    if strict and np.any(v < c):
        raise ValueError("theory curve defined for v >= c")
    gam2 = np.clip(1.0 - (c / v) ** 2, 0.0, None)
    out = A_r * (alpha * v) ** (r / (1 + r)) * gam2 ** ((2 * r + 1) / (2 * r + 2))
    return float(out) if out.ndim == 0 else out


def fit_amplitude(v, d, alpha, c: float, r: float = 2.0):
    """Least-squares A_r (relative residuals) for supersonic data; returns (A, rel residuals).

    ``alpha`` may be a scalar or one value per point.
    """
    v = np.asarray(v, float)
    d = np.asarray(d, float)
    shape = theory_density(v, np.asarray(alpha, float), c, r, 1.0)
    # minimise sum (A s/d - 1)^2
    w = shape / d
    A = float(np.sum(w) / np.sum(w * w))
    return A, A * shape / d - 1.0


def lz_table(r: float, deltas) -> np.ndarray:
    return np.array([[dl, lz_probability(r, dl)] for dl in deltas])
