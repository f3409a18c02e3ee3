"""State-vector simulation of the transverse-field Ising model on small open lattices.

H(t) = -sum_<ss'> J_ss'(t) Z_s Z_s' - sum_s g_s(t) X_s,
g_s = g_c (1 + eps), J_ss' = J_c (1 - eps), eps taken at sites and bond midpoints.

Basis index bit s holds the Z eigenvalue of spin s (0 -> +1, 1 -> -1).
"""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh, lobpcg

from .bdg import _stage_weights
from .schedule import RampDrive, envelope_value

G_CRITICAL_2D = 3.04438
MAX_SPINS = 16
NORM_TOL = 1e-8


class ConvergenceError(RuntimeError):
    pass


class NormDriftError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SpinLattice2D:
    Lx: int
    Ly: int
    g_c: float = G_CRITICAL_2D
    J_c: float = 1.0

    def __post_init__(self):
        if self.Lx < 1 or self.Ly < 1:
            raise ValueError("lattice sides must be positive")
        if self.Lx * self.Ly > MAX_SPINS:
            raise ValueError(f"{self.Lx}x{self.Ly} exceeds the {MAX_SPINS}-spin cap")
        y, x = np.divmod(np.arange(self.n), self.Lx)
        coords = np.column_stack([x, y]).astype(float)
        idx = np.arange(self.n)
        mx, my = x < self.Lx - 1, y < self.Ly - 1
        bi = np.concatenate([idx[mx], idx[my]])
        bj = np.concatenate([idx[mx] + 1, idx[my] + self.Lx])
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "bond_i", bi)
        object.__setattr__(self, "bond_j", bj)
        object.__setattr__(self, "bond_mid", 0.5 * (coords[bi] + coords[bj]))

    @classmethod
    def chain(cls, L: int, g_c: float = 1.0, J_c: float = 1.0):
        return cls(L, 1, g_c, J_c)

    @property
    def n(self) -> int:
        return self.Lx * self.Ly

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def centroid(self):
        c = self.coords.mean(axis=0)
        return float(c[0]), float(c[1])

    def max_distance(self, center) -> float:
        xy = np.vstack([self.coords, self.bond_mid]) if len(self.bond_mid) else self.coords
        return float(np.max(np.hypot(xy[:, 0] - center[0], xy[:, 1] - center[1])))

    def bind(self, drive: RampDrive) -> RampDrive:
        return drive.with_center(self.centroid)

    def t_span(self, drive: RampDrive):
        drive = self.bind(drive)
        dmax = 0.0 if drive.is_uniform else self.max_distance(drive.center)
        return drive.t_start(), drive.t_end(dmax)

    def zz_table(self) -> np.ndarray:
        """(n_bonds, dim) array of z_i z_j = +-1 per basis state."""
        states = np.arange(self.dim)
        zi = 1 - 2 * ((states[None, :] >> self.bond_i[:, None]) & 1)
        zj = 1 - 2 * ((states[None, :] >> self.bond_j[:, None]) & 1)
        return (zi * zj).astype(float)


class SpinHamiltonian:
    def __init__(self, lattice: SpinLattice2D, drive: RampDrive | None = None):
        self.lat = lattice
        self.drive = lattice.bind(drive) if drive is not None else None
        self._zz = lattice.zz_table()

    def _eps(self, t, pos, eps):
        if eps is not None:
            return np.full(len(pos), float(eps))
        if self.drive is None:
            raise ValueError("need a drive or an explicit eps")
        d = self.drive
        if d.is_uniform:
            return np.full(len(pos), envelope_value(d.envelope, t / d.tau))
        return d.eps(t, pos)

    def fields(self, t=0.0, eps=None):
        return self.lat.g_c * (1.0 + self._eps(t, self.lat.coords, eps))

    def couplings(self, t=0.0, eps=None):
        if not len(self.lat.bond_i):
            return np.zeros(0)
        return self.lat.J_c * (1.0 - self._eps(t, self.lat.bond_mid, eps))

    def diagonal(self, t=0.0, eps=None) -> np.ndarray:
        J = self.couplings(t, eps)
        if not len(J):
            return np.zeros(self.lat.dim)
        return -(J @ self._zz)

    def apply(self, psi, t=0.0, eps=None):
        lat = self.lat
        out = self.diagonal(t, eps) * psi
        g = self.fields(t, eps)
        for s in range(lat.n):
            v = psi.reshape(-1, 2, 1 << s)
            out.reshape(-1, 2, 1 << s)[...] -= g[s] * v[:, ::-1, :]
        return out

    def operator(self, t=0.0, eps=None) -> LinearOperator:
        dim = self.lat.dim
        return LinearOperator((dim, dim), matvec=lambda x: self.apply(np.ravel(x), t, eps),
                              dtype=float)

    def dense(self, t=0.0, eps=None) -> np.ndarray:
        dim = self.lat.dim
        return np.column_stack([self.apply(e, t, eps) for e in np.eye(dim)])


def ground_state(ham: SpinHamiltonian, t=0.0, eps=None, backend="eigsh", tol=1e-9):
    """(E0, psi) by an iterative eigensolver; backends eigsh, lobpcg, dense."""
    dim = ham.lat.dim
    if backend == "dense" or dim <= 16:
        w, v = np.linalg.eigh(ham.dense(t, eps))
        e0, psi = w[0], v[:, 0].astype(complex)
    elif backend == "eigsh":
        try:
            w, v = eigsh(ham.operator(t, eps), k=1, which="SA", tol=1e-13, maxiter=20 * dim)
        except Exception as exc:  # ArpackNoConvergence
            raise ConvergenceError(f"eigsh did not converge: {exc}") from exc
        e0, psi = w[0], v[:, 0].astype(complex)
    elif backend == "lobpcg":
        rng = np.random.default_rng(0)
        x0 = rng.standard_normal((dim, 4))
        diag = ham.diagonal(t, eps)
        precond = LinearOperator((dim, dim), matvec=lambda x: np.ravel(x) / (np.abs(diag) + 1.0 + 1e-3))
        op = ham.operator(t, eps)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            # a warm restart from the converged block polishes the residual
            for _ in range(2):
                w, x0 = lobpcg(op, x0, M=precond, largest=False, tol=1e-12, maxiter=2000)
        e0, psi = w[0], x0[:, 0].astype(complex)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    psi = psi / np.linalg.norm(psi)
    res = np.linalg.norm(ham.apply(psi, t, eps) - e0 * psi)
    if res > tol:
        raise ConvergenceError(f"{backend}: residual {res:.2e} > {tol:g}")
    return float(e0), psi


def _apply_x_rotations(psi, angles):
    """psi <- prod_s exp(i angle_s X_s) psi."""
    for s, a in enumerate(angles):
        v = psi.reshape(-1, 2, 1 << s)
        c, si = np.cos(a), 1j * np.sin(a)
        lo = v[:, 0, :].copy()
        v[:, 0, :] = c * lo + si * v[:, 1, :]
        v[:, 1, :] = si * lo + c * v[:, 1, :]
    return psi


def evolve_state(psi, ham: SpinHamiltonian, t0: float, t1: float, dt: float = 0.05,
                 scheme: str = "suzuki4") -> np.ndarray:
    """Split-operator evolution: Strang sweeps exp(-iZZ h/2) exp(-iX h) exp(-iZZ h/2)
    composed into the same Suzuki/Yoshida schemes as the BdG propagator."""
    psi = np.array(psi, dtype=complex)
    span = t1 - t0
    n = max(1, int(np.ceil(span / dt - 1e-9))) if span > 0 else 0
    if n == 0:
        return psi
    h = span / n
    w = np.array(_stage_weights(scheme))
    mids = np.cumsum(w) - 0.5 * w
    zz = ham._zz
    for k in range(n):
        for wk, mk in zip(w, mids):
            t = t0 + h * (k + mk)
            J = ham.couplings(t)
            phase = np.exp(0.5j * wk * h * (J @ zz)) if len(J) else 1.0
            psi *= phase
            _apply_x_rotations(psi, wk * h * ham.fields(t))
            psi *= phase
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > NORM_TOL:
        raise NormDriftError(f"norm drifted to {nrm:.12f}")
    return psi


def log_infidelity(psi, gs, n: int) -> float:
    """f = -ln|<psi|gs>|^2 / n; orthogonal states give +inf."""
    ov = abs(np.vdot(psi, gs)) ** 2
    if ov <= 0.0:
        return float("inf")
    return float(-np.log(ov) / n)


def majorana_covariance(psi, n: int) -> np.ndarray:
    """Gamma_pq = i <psi|gamma_p gamma_q|psi> (p != q) for a 1D chain.

    a_s = -Z_s prod_{s'<s} X_s',  b_s = Y_s prod_{s'<s} X_s'.
    """
    dim = len(psi)
    states = np.arange(dim)
    phis = []
    for kind in ("a", "b"):
        for s in range(n):
            v = np.array(psi, dtype=complex)
            # Z_s or Y_s = i X_s Z_s acting first (rightmost), then the string
            z = 1 - 2 * ((states >> s) & 1)
            if kind == "a":
                v = -z * v
            else:
                v = 1j * z * v
                v = v.reshape(-1, 2, 1 << s)[:, ::-1, :].reshape(dim)
            for sp in range(s):
                v = v.reshape(-1, 2, 1 << sp)[:, ::-1, :].reshape(dim)
            phis.append(v)
    F = np.array(phis)
    G = (1j * (F.conj() @ F.T)).real
    np.fill_diagonal(G, 0.0)
    return G


@dataclass
class SpinRecord:
    Lx: int
    Ly: int
    mode: str
    tau: float | None
    alpha: float | None
    v: float | None
    tau_total: float
    dt: float
    f: float
    e: float
    wall_time: float
    residual: float = 0.0


def simulate_spin(lattice: SpinLattice2D, drive: RampDrive, dt: float = 0.05,
                  scheme: str = "suzuki4", return_state: bool = False):
    start = time.perf_counter()
    drive = lattice.bind(drive)
    ham = SpinHamiltonian(lattice, drive)
    t0, t1 = lattice.t_span(drive)
    _, psi0 = ground_state(ham, t0)
    ef, gsf = ground_state(ham, t1)
    psi = evolve_state(psi0, ham, t0, t1, dt, scheme)
    e = (np.vdot(psi, ham.apply(psi, t1)).real - ef) / lattice.n
    rec = SpinRecord(lattice.Lx, lattice.Ly, drive.mode.value,
                     drive.tau if drive.is_uniform else None,
                     None if drive.is_uniform else drive.alpha,
                     None if drive.is_uniform else drive.v,
                     t1 - t0, dt, log_infidelity(psi, gsf, lattice.n), float(e),
                     time.perf_counter() - start, abs(float(np.linalg.norm(psi)) - 1.0))
    return (rec, psi, gsf) if return_state else rec
