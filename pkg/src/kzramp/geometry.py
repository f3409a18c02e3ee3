"""Lattice embeddings: open chains, square patches and hexagonal honeycomb flakes."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

SQRT3 = np.sqrt(3.0)
# honeycomb translation vectors between vertical z-bonds (unit bond length)
M1 = np.array([SQRT3 / 2, 1.5])
M2 = np.array([SQRT3 / 2, -1.5])


class Shape(str, enum.Enum):
    CHAIN = "chain"
    SQUARE = "square"
    HEXAGON = "hexagon"


@dataclass(frozen=True, eq=False)
class Bonds:
    """Directed bond list of a single kind: site i -> site j."""

    kind: str
    i: np.ndarray
    j: np.ndarray
    midpoints: np.ndarray

    def __len__(self):
        return len(self.i)


@dataclass(frozen=True, eq=False)
class LatticeGeometry:
    shape: Shape
    L: int
    coords: np.ndarray
    bonds: tuple
    periodic: bool = False

    @property
    def n_sites(self) -> int:
        return len(self.coords)

    @property
    def centroid(self) -> tuple[float, float]:
        c = self.coords.mean(axis=0)
        return float(c[0]), float(c[1])

    def bonds_of(self, kind: str) -> Bonds:
        for b in self.bonds:
            if b.kind == kind:
                return b
        raise KeyError(kind)

    def max_distance(self, center) -> float:
        """Largest distance from center to any site or bond midpoint."""
        pts = [self.coords] + [b.midpoints for b in self.bonds if len(b)]
        xy = np.vstack(pts)
        return float(np.max(np.hypot(xy[:, 0] - center[0], xy[:, 1] - center[1])))


def _bonds(kind, i, j, coords, midpoints=None):
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    if midpoints is None:
        midpoints = 0.5 * (coords[i] + coords[j]) if len(i) else np.zeros((0, 2))
    return Bonds(kind, i, j, np.asarray(midpoints, dtype=float).reshape(-1, 2))


def chain(L: int, periodic: bool = False) -> LatticeGeometry:
    if L < 1:
        raise ValueError("L must be >= 1")
    coords = np.column_stack([np.arange(L, dtype=float), np.zeros(L)])
    i = np.arange(L - 1)
    j = i + 1
    if periodic and L > 2:
        i = np.append(i, L - 1)
        j = np.append(j, 0)
    return LatticeGeometry(Shape.CHAIN, L, coords, (_bonds("x", i, j, coords),), periodic)


def square(L: int, periodic: bool = False) -> LatticeGeometry:
    """L x L patch, site index x + L*y."""
    if L < 1:
        raise ValueError("L must be >= 1")
    y, x = np.divmod(np.arange(L * L), L)
    coords = np.column_stack([x, y]).astype(float)
    idx = np.arange(L * L)
    if periodic:
        ix, jx = idx, (x + 1) % L + L * y
        iy, jy = idx, x + L * ((y + 1) % L)
    else:
        mx, my = x < L - 1, y < L - 1
        ix, jx = idx[mx], idx[mx] + 1
        iy, jy = idx[my], idx[my] + L
    bonds = (_bonds("x", ix, jx, coords), _bonds("y", iy, jy, coords))
    return LatticeGeometry(Shape.SQUARE, L, coords, bonds, periodic)


def _hex_dist(i, j):
    # distance on the triangular lattice spanned by M1, M2 (120 degrees apart)
    i, j = np.asarray(i), np.asarray(j)
    return np.where(i * j >= 0, np.maximum(np.abs(i), np.abs(j)), np.abs(i) + np.abs(j))


def hexagon(L: int) -> LatticeGeometry:
    """Honeycomb flake with L hexagonal plaquettes along each edge.

    Sites are vertical z-bonds n = i*M1 + j*M2 placed at the bond midpoint.
    Plaquette (i, j) has z-bonds n and n+M1+M2 as its left and right edges,
    plus the lower end of n+M1 (top vertex) and the upper end of n+M2
    (bottom vertex). Only z-bonds with both ends in the flake are kept;
    x-bonds join the lower end of n to the upper end of n-M1, y-bonds the
    lower end of n to the upper end of n+M2.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    R = L - 1
    rng = np.arange(-R, R + 1)
    pi, pj = np.meshgrid(rng, rng, indexing="ij")
    keep = _hex_dist(pi, pj) <= R
    pi, pj = pi[keep], pj[keep]
    lower, upper = set(), set()
    for i, j in zip(pi.tolist(), pj.tolist()):
        for key in ((i, j), (i + 1, j + 1)):
            lower.add(key)
            upper.add(key)
        lower.add((i + 1, j))
        upper.add((i, j + 1))
    full = sorted(lower & upper, key=lambda ij: (ij[0] - ij[1], ij[0] + ij[1]))
    index = {ij: k for k, ij in enumerate(full)}
    ij = np.array(full, dtype=float)
    # shift so the central plaquette sits at the origin
    coords = ij[:, :1] * M1 + ij[:, 1:] * M2 - np.array([SQRT3 / 2, 0.0])
    xi, xj, yi, yj = [], [], [], []
    for (i, j), k in index.items():
        nx = index.get((i - 1, j))
        if nx is not None:
            xi.append(k)
            xj.append(nx)
        ny = index.get((i, j + 1))
        if ny is not None:
            yi.append(k)
            yj.append(ny)
    # the +-1/2 vertical offsets of the two Majorana ends cancel in the average
    bx = _bonds("x", xi, xj, coords)
    by = _bonds("y", yi, yj, coords)
    n = len(full)
    bz = _bonds("z", np.arange(n), np.arange(n), coords, coords.copy())
    return LatticeGeometry(Shape.HEXAGON, L, coords, (bz, bx, by))


def honeycomb_torus(n1: int, n2: int) -> LatticeGeometry:
    """Periodic z-bond lattice of n1 x n2 cells, for dispersion checks only."""
    i, j = np.divmod(np.arange(n1 * n2), n2)
    coords = i[:, None] * M1 + j[:, None] * M2
    k = np.arange(n1 * n2)
    xn = ((i - 1) % n1) * n2 + j
    yn = i * n2 + (j + 1) % n2
    bz = _bonds("z", k, k, coords, coords.copy())
    bx = _bonds("x", k, xn, coords, coords)
    by = _bonds("y", k, yn, coords, coords)
    return LatticeGeometry(Shape.HEXAGON, max(n1, n2), coords, (bz, bx, by), periodic=True)
