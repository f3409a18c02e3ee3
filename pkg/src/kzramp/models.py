"""Quadratic fermion models driven by a ramp.

Every model is stored in Majorana form. With a_i = c_i + c_i^dag and
b_i = -i (c_i - c_i^dag),

    H = sum A_ij c_i^dag c_j + 1/2 sum (B_ij c_i^dag c_j^dag + h.c.) + const
      = (i/2) sum_ij M_ij a_i b_j + 1/2 tr A + const,   M = A - B.

M is a sum of edge classes. Each class is a matching between a-indices and
b-indices whose entries depend linearly on the local envelope value,
M_ij(t) = m_final + m_slope * eps(t, position).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .schedule import RampDrive


class ModelKind(str, enum.Enum):
    ISING = "ising"
    PWAVE = "pwave"
    KITAEV = "kitaev"


class Binding(str, enum.Enum):
    MAIN = "main"  # Ising: g = 1 + eps and J = 1 - eps
    FIELD = "field"  # Ising: g = 1 + eps, J = 1


_SHAPES = {
    ModelKind.ISING: geo.Shape.CHAIN,
    ModelKind.PWAVE: geo.Shape.SQUARE,
    ModelKind.KITAEV: geo.Shape.HEXAGON,
}


@dataclass(frozen=True, eq=False)
class EdgeClass:
    name: str
    i: np.ndarray
    j: np.ndarray
    m_final: np.ndarray
    m_slope: np.ndarray
    pos: np.ndarray

    def __len__(self):
        return len(self.i)

    @property
    def ramped(self) -> bool:
        return bool(np.any(self.m_slope != 0.0))

    def values(self, eps) -> np.ndarray:
        return self.m_final + self.m_slope * eps


@dataclass(frozen=True, eq=False)
class Offset:
    """Scalar energy offset c_final + sum c_slope * eps(pos)."""

    c_final: float
    c_slope: np.ndarray
    pos: np.ndarray

    def value(self, eps) -> float:
        return float(self.c_final + np.sum(self.c_slope * eps))


@dataclass(frozen=True, eq=False)
class QuadraticModel:
    kind: ModelKind
    geometry: geo.LatticeGeometry
    classes: tuple
    offset: Offset
    params: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.geometry.n_sites

    def default_center(self):
        return self.geometry.centroid

    def bind(self, drive: RampDrive) -> RampDrive:
        """Drive with its center resolved against this lattice."""
        if not drive.is_uniform and self.geometry.periodic:
            raise ValueError("inhomogeneous drives need open boundaries")
        return drive.with_center(self.default_center())

    def max_distance(self, drive: RampDrive) -> float:
        if drive.is_uniform:
            return 0.0
        return self.geometry.max_distance(self.bind(drive).center)

    def t_span(self, drive: RampDrive) -> tuple[float, float]:
        drive = self.bind(drive)
        return drive.t_start(), drive.t_end(self.max_distance(drive))

    def total_time(self, drive: RampDrive) -> float:
        t0, t1 = self.t_span(drive)
        return t1 - t0

    def class_values(self, drive: RampDrive | None, t: float, eps: float | None = None):
        """Entries of each edge class at time t (or at a fixed uniform eps)."""
        drive = self.bind(drive) if drive is not None else None
        out = []
        for ec in self.classes:
            e = eps if eps is not None else drive.eps(t, ec.pos)
            out.append(ec.values(e))
        return out

    def m_matrix(self, drive=None, t=0.0, eps=None, out=None) -> np.ndarray:
        n = self.n
        M = np.zeros((n, n)) if out is None else out
        M[...] = 0.0
        for ec, val in zip(self.classes, self.class_values(drive, t, eps)):
            np.add.at(M, (ec.i, ec.j), val)
        return M

    def const(self, drive=None, t=0.0, eps=None) -> float:
        if eps is None:
            eps = self.bind(drive).eps(t, self.offset.pos) if len(self.offset.pos) else 0.0
        return self.offset.value(eps)

    def majorana_h(self, drive=None, t=0.0, eps=None) -> np.ndarray:
        M = self.m_matrix(drive, t, eps)
        n = self.n
        h = np.zeros((2 * n, 2 * n))
        h[:n, n:] = M
        h[n:, :n] = -M.T
        return h


def build_bdg(model: QuadraticModel, drive: RampDrive | None = None, t: float = 0.0,
              eps: float | None = None, out=None):
    """(A, B, const) of the quadratic Hamiltonian at time t.

    Pass ``eps`` instead of a drive to evaluate at a spatially uniform value.
    ``out`` may hold a pair of preallocated N x N buffers.
    """
    M = model.m_matrix(drive, t, eps)
    if out is None:
        A, B = np.empty_like(M), np.empty_like(M)
    else:
        A, B = out
    np.add(M, M.T, out=A)
    A *= 0.5
    np.subtract(M.T, M, out=B)
    B *= 0.5
    const = model.const(drive, t, eps)
    return A, B, const


def energy_constant(model: QuadraticModel, drive=None, t=0.0, eps=None) -> float:
    """Constant of the Majorana form: 1/2 tr A + const."""
    M = model.m_matrix(drive, t, eps)
    return 0.5 * float(np.trace(M)) + model.const(drive, t, eps)


def _class(name, i, j, m_final, m_slope, pos):
    n = len(i)
    return EdgeClass(name, np.asarray(i, np.int64), np.asarray(j, np.int64),
                     np.broadcast_to(np.asarray(m_final, float), (n,)).copy(),
                     np.broadcast_to(np.asarray(m_slope, float), (n,)).copy(),
                     np.asarray(pos, float).reshape(n, 2))


def ising_chain(L: int, binding: Binding | str = Binding.MAIN, periodic: bool = False,
                g_final: float = 1.0, J_final: float = 1.0) -> QuadraticModel:
    """Transverse-field Ising chain H = -sum J sz sz - sum g sx, in fermions.

    main binding: g_s = g_final (1 + eps), J = J_final (1 - eps);
    field binding: g_s = g_final (1 + eps), J = J_final.
    """
    binding = Binding(binding)
    g = geo.chain(L, periodic)
    bonds = g.bonds_of("x")
    n = g.n_sites
    site = np.arange(n)
    onsite = _class("onsite", site, site, 2 * g_final, 2 * g_final, g.coords)
    j_slope = 2 * J_final if binding is Binding.MAIN else 0.0
    # M[s+1, s] = -2 J
    bond = _class("bond", bonds.j, bonds.i, -2 * J_final, j_slope, bonds.midpoints)
    offset = Offset(-g_final * n, np.full(n, -g_final), g.coords)
    classes = (onsite, bond) if len(bonds) else (onsite,)
    return QuadraticModel(ModelKind.ISING, g, classes, offset,
                          {"binding": binding.value, "g_final": g_final, "J_final": J_final})


def pwave(L: int, gamma: float = 1.0, lambda_i: float = 2.0, lambda_f: float = 1.0,
          periodic: bool = False) -> QuadraticModel:
    """p-wave paired spinless fermions on an L x L square lattice.

    H = sum_<ss'> (c_s^dag c_s' - gamma c_s c_s' + h.c.) - 4 lambda sum c_s^dag c_s,
    lambda = lambda_f + (lambda_i - lambda_f) eps.
    """
    g = geo.square(L, periodic)
    n = g.n_sites
    site = np.arange(n)
    dl = lambda_i - lambda_f
    classes = [_class("onsite", site, site, -4 * lambda_f, -4 * dl, g.coords)]
    for kind in ("x", "y"):
        b = g.bonds_of(kind)
        if not len(b):
            continue
        # M[s', s] = 1 + gamma, M[s, s'] = 1 - gamma for s' = s + e
        classes.append(_class(kind + "+", b.j, b.i, 1 + gamma, 0.0, b.midpoints))
        if gamma != 1.0:
            classes.append(_class(kind + "-", b.i, b.j, 1 - gamma, 0.0, b.midpoints))
    offset = Offset(0.0, np.zeros(0), np.zeros((0, 2)))
    return QuadraticModel(ModelKind.PWAVE, g, tuple(classes), offset,
                          {"gamma": gamma, "lambda_i": lambda_i, "lambda_f": lambda_f})


def kitaev(L: int, Jx: float = 1.0, Jy: float = 1.0, Ji: float = 4.0, Jf: float = 2.0,
           geometry: geo.LatticeGeometry | None = None) -> QuadraticModel:
    """Vortex-free Kitaev honeycomb model, one complex fermion per z-bond.

    The Majorana a_n (= c_n + c_n^dag) sits at the lower end of z-bond n and
    couples to the upper ends b of bonds n, n - M1 and n + M2 with 2J^z,
    2J^x and 2J^y. J^z = Jf + (Ji - Jf) eps.
    """
    g = geometry if geometry is not None else geo.hexagon(L)
    n = g.n_sites
    bz, bx, by = g.bonds_of("z"), g.bonds_of("x"), g.bonds_of("y")
    classes = [_class("z", bz.i, bz.j, 2 * Jf, 2 * (Ji - Jf), bz.midpoints)]
    if len(bx):
        classes.append(_class("x", bx.i, bx.j, 2 * Jx, 0.0, bx.midpoints))
    if len(by):
        classes.append(_class("y", by.i, by.j, 2 * Jy, 0.0, by.midpoints))
    # no constant in the Majorana form: cancel 1/2 tr A = sum J^z
    offset = Offset(-Jf * n, np.full(n, -(Ji - Jf)), g.coords)
    return QuadraticModel(ModelKind.KITAEV, g, tuple(classes), offset,
                          {"Jx": Jx, "Jy": Jy, "Ji": Ji, "Jf": Jf})


def kitaev_torus(n1: int, n2: int, Jx=1.0, Jy=1.0, Jz=2.0) -> QuadraticModel:
    return kitaev(max(n1, n2), Jx, Jy, Ji=Jz, Jf=Jz, geometry=geo.honeycomb_torus(n1, n2))


def make_model(kind: ModelKind | str, L: int, **kw) -> QuadraticModel:
    kind = ModelKind(kind)
    builder = {ModelKind.ISING: ising_chain, ModelKind.PWAVE: pwave, ModelKind.KITAEV: kitaev}[kind]
    return builder(L, **kw)


def check_geometry(model: QuadraticModel):
    want = _SHAPES[model.kind]
    if model.geometry.shape is not want:
        raise ValueError(f"{model.kind.value} needs a {want.value} lattice, "
                         f"got {model.geometry.shape.value}")


# analytic bulk dispersions ---------------------------------------------------

def dispersion(kind: ModelKind | str, params: dict, k):
    """Quasiparticle energy at quasimomentum k (scalar for chains, 2-vector in 2D)."""
    kind = ModelKind(kind)
    k = np.asarray(k, dtype=float)
    if kind is ModelKind.ISING:
        g, J = params.get("g", 1.0), params.get("J", 1.0)
        return 2 * np.sqrt((g - J * np.cos(k)) ** 2 + (J * np.sin(k)) ** 2)
    kx, ky = k[..., 0], k[..., 1]
    if kind is ModelKind.PWAVE:
        lam, gam = params.get("lambda", 1.0), params.get("gamma", 1.0)
        return 2 * np.sqrt((np.cos(kx) + np.cos(ky) - 2 * lam) ** 2
                           + gam ** 2 * (np.sin(kx) + np.sin(ky)) ** 2)
    Jx, Jy, Jz = params.get("Jx", 1.0), params.get("Jy", 1.0), params.get("Jz", 2.0)
    k1 = kx * geo.M1[0] + ky * geo.M1[1]
    k2 = kx * geo.M2[0] + ky * geo.M2[1]
    return 2 * np.abs(Jz + Jx * np.exp(1j * k1) + Jy * np.exp(-1j * k2))


def sound_speeds(kind: ModelKind | str, params: dict | None = None):
    """Critical quasiparticle velocities; quadratic directions report 0."""
    kind = ModelKind(kind)
    params = params or {}
    if kind is ModelKind.ISING:
        return {"c": 2.0 * params.get("J", 1.0)}
    if kind is ModelKind.PWAVE:
        gam = params.get("gamma", 1.0)
        return {"c_p": 2 * np.sqrt(2.0) * gam, "c_q": 0.0}
    Jx = params.get("Jx", 1.0)
    # linear along k_y at the double Fermi point (0, 2 pi / 3): omega ~ 6 |q|
    return {"c_x": 0.0, "c_y": 6.0 * Jx}


def fermi_points(lam: float):
    """Gapless points of the gamma = 1 p-wave model for 0 < lambda <= 1."""
    if not 0 < lam <= 1:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")
    if lam == 1:
        return [np.zeros(2)]
    kf = np.sqrt(2.0) * np.arccos(lam)
    p = np.array([kf, -kf]) / np.sqrt(2.0)
    return [p, -p]


def periodic_momenta(kind: ModelKind | str, shape) -> np.ndarray:
    """Allowed quasimomenta of a periodic lattice (rows of k)."""
    kind = ModelKind(kind)
    if kind is ModelKind.ISING:
        L = shape
        return 2 * np.pi * np.arange(L) / L
    if kind is ModelKind.PWAVE:
        L = shape
        m = 2 * np.pi * np.arange(L) / L
        kx, ky = np.meshgrid(m, m, indexing="ij")
        return np.column_stack([kx.ravel(), ky.ravel()])
    n1, n2 = shape
    # reciprocal vectors: G_a . M_b = 2 pi delta_ab
    Minv = np.linalg.inv(np.vstack([geo.M1, geo.M2]))
    G = 2 * np.pi * Minv.T
    a, b = np.meshgrid(np.arange(n1) / n1, np.arange(n2) / n2, indexing="ij")
    return a.ravel()[:, None] * G[0] + b.ravel()[:, None] * G[1]
