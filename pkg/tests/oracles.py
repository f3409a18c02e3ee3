"""Brute-force many-body references, written against numpy/scipy only."""
import numpy as np
from scipy.integrate import solve_ivp

X = np.array([[0, 1], [1, 0]], complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def site_op(op, s, n):
    out = np.ones((1, 1), complex)
    for k in range(n):
        out = np.kron(out, op if k == s else I2)
    return out


_TERMS = {}


def _terms(n):
    if n not in _TERMS:
        xs = np.array([site_op(X, s, n).real for s in range(n)])
        zz = np.array([np.diag(site_op(Z, b, n) @ site_op(Z, b + 1, n)).real
                       for b in range(n - 1)])
        _TERMS[n] = xs, zz
    return _TERMS[n]


def ising_dense(g, J):
    """-sum J_b Z_b Z_b+1 - sum g_s X_s on an open chain."""
    xs, zz = _terms(len(g))
    H = -np.tensordot(np.asarray(g, float), xs, axes=1)
    H[np.diag_indices_from(H)] -= np.asarray(J, float) @ zz
    return H


def jw_annihilators(n):
    """c_s with X_s = 1 - 2 c_s^dag c_s (string of X on the left)."""
    cs = []
    for s in range(n):
        string = np.eye(2 ** n, dtype=complex)
        for k in range(s):
            string = string @ site_op(X, k, n)
        cs.append(string @ (site_op(Z, s, n) - 1j * site_op(Y, s, n)) / 2)
    return cs


def quadratic_dense(A, B, const, cs):
    """sum A c^dag c + (sum B c^dag c^dag + h.c.)/2 + const as a dense matrix."""
    n = len(cs)
    dim = cs[0].shape[0]
    H = const * np.eye(dim, dtype=complex)
    for i in range(n):
        for j in range(n):
            H += A[i, j] * cs[i].conj().T @ cs[j]
            pair = 0.5 * B[i, j] * cs[i].conj().T @ cs[j].conj().T
            H += pair + pair.conj().T
    return H


def quasiparticle_creators(A, B, cs):
    """gamma_m^dag for the positive eigenvalues of [[A, B], [-B, -A]], by eigh."""
    n = len(cs)
    h = np.block([[A, B], [-B, -A]])
    w, vec = np.linalg.eigh(h)
    ops = []
    for m in np.argsort(w)[n:]:
        x, y = vec[:n, m], vec[n:, m]
        ops.append((w[m], sum(x[i] * cs[i].conj().T + y[i] * cs[i] for i in range(n))))
    return ops


def evolve_dense(H_of_t, psi0, t0, t1, rtol=1e-11, atol=1e-12):
    sol = solve_ivp(lambda t, y: -1j * (H_of_t(t) @ y), (t0, t1), psi0.astype(complex),
                    method="DOP853", rtol=rtol, atol=atol)
    return sol.y[:, -1]


def ground_state(H):
    w, v = np.linalg.eigh(H)
    return w[0], v[:, 0]


def ising_critical_ab(L):
    """Quadratic form of the open chain at g = J = 1, written out by hand."""
    A = 2 * np.eye(L) - np.eye(L, k=1) - np.eye(L, k=-1)
    B = -np.eye(L, k=1) + np.eye(L, k=-1)
    return A, B


def dense_ising_ramp(L, drive):
    """Exact spin-chain evolution along a drive; returns (d, e, fidelity)."""
    drive = drive.with_center(((L - 1) / 2, 0.0))
    sites = np.column_stack([np.arange(L), np.zeros(L)]).astype(float)
    bonds = (sites[:-1] + sites[1:]) / 2

    def ham(t):
        return ising_dense(1 + drive.eps(t, sites), 1 - drive.eps(t, bonds))

    t0 = drive.t_start()
    t1 = drive.t_end((L - 1) / 2)
    _, psi0 = ground_state(ham(t0))
    psi = evolve_dense(ham, psi0, t0, t1)
    Hf = ham(t1)
    E0, gs = ground_state(Hf)
    e = (np.vdot(psi, Hf @ psi).real - E0) / L
    cs = jw_annihilators(L)
    nums = [np.vdot(psi, gd @ (gd.conj().T @ psi)).real
            for _, gd in quasiparticle_creators(*ising_critical_ab(L), cs)]
    return float(np.sum(nums) / L), float(e), float(abs(np.vdot(gs, psi)) ** 2)
