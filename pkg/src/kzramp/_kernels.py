"""Compiled row-rotation kernels for the Majorana propagator."""
from __future__ import annotations

import numba as nb
import numpy as np


@nb.njit(cache=True, fastmath=True)
def apply_rotations(Qb, sub_class, pidx, qidx, nedge, cs, sn):
    """Rotate row pairs (p, q) of every column block in place.

    Qb has shape (nblk, rows, B). Substep s applies the edge class
    sub_class[s]; edge e of that class rotates rows pidx[c, e], qidx[c, e]
    by the angle whose cosine and sine are cs[s, e], sn[s, e].
    """
    nblk, _, B = Qb.shape
    ns = sub_class.shape[0]
    for k in range(nblk):
        Q = Qb[k]
        for s in range(ns):
            c = sub_class[s]
            for e in range(nedge[c]):
                p = pidx[c, e]
                q = qidx[c, e]
                co = cs[s, e]
                si = sn[s, e]
                for j in range(B):
                    x = Q[p, j]
                    y = Q[q, j]
                    Q[p, j] = co * x + si * y
                    Q[q, j] = co * y - si * x


@nb.njit(cache=True)
def magnus4_lz(r, delta, z0, sy, sz, phi, hmax):
    """Excitation probability of the two-level sweep
    i psi' = [ |delta z|^r sx/2 - (sy*sigma_y + sz*sigma_z)/2 ] psi from z0 < 0 to 0.

    Fourth-order Magnus steps with exact 2x2 exponentials; the step is the
    smaller of hmax and phi / (local level splitting).
    """
    ny = -0.5 * sy
    nz = -0.5 * sz
    nx = 0.5 * abs(delta * z0) ** r
    nn = np.sqrt(nx * nx + ny * ny + nz * nz)
    # eigenvector of n.sigma for eigenvalue -|n|
    a = -(nx - 1j * ny)
    b = nz + nn + 0j
    if abs(a) ** 2 + abs(b) ** 2 < 1e-300:
        a = 1.0 + 0j
        b = 0j
    nrm = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    a /= nrm
    b /= nrm
    z = z0
    g1 = 0.5 - np.sqrt(3.0) / 6.0
    g2 = 0.5 + np.sqrt(3.0) / 6.0
    while z < 0.0:
        e = 0.5 * abs(delta * z) ** r + 0.5
        h = min(hmax, phi / e)
        if z + h > 0.0:
            h = -z
        x1 = 0.5 * abs(delta * (z + g1 * h)) ** r
        x2 = 0.5 * abs(delta * (z + g2 * h)) ** r
        k = np.sqrt(3.0) * h * h / 6.0
        # commutator term n2 x n1 with n = (x, ny, nz)
        cx = 0.0
        cy = nz * x1 - x2 * nz
        cz = x2 * ny - ny * x1
        mx = 0.5 * h * (x1 + x2) + k * cx
        my = h * ny + k * cy
        mz = h * nz + k * cz
        m = np.sqrt(mx * mx + my * my + mz * mz)
        co = np.cos(m)
        si = np.sin(m) / m if m > 0.0 else 1.0
        na = co * a - 1j * si * (mz * a + (mx - 1j * my) * b)
        nb_ = co * b - 1j * si * ((mx + 1j * my) * a - mz * b)
        a = na
        b = nb_
        z += h
    nn = np.sqrt(ny * ny + nz * nz)
    prod = np.conj(a) * b
    bloch = 2.0 * prod.imag * ny + (abs(a) ** 2 - abs(b) ** 2) * nz
    return 0.5 * (1.0 + bloch / nn)
