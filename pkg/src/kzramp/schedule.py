"""Ramp envelopes, space-time drives and Kibble-Zurek scale estimates.

Time convention: a drive is simulated from ``drive.t_start(...)`` to
``drive.t_end(...)``; ``local_u`` uses the raw formulas ``u = t/tau`` and
``u = alpha*(v*t - dist)``, so ``t_start`` is negative.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class EnvelopeKind(str, enum.Enum):
    SMOOTH_SINE = "smooth_sine"
    POWER_LAW = "power_law"
    LINEAR_FIELD = "linear_field"


@dataclass(frozen=True)
class RampEnvelope:
    kind: EnvelopeKind = EnvelopeKind.SMOOTH_SINE
    r: float = 2.0
    eps0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", EnvelopeKind(self.kind))
        if self.kind is EnvelopeKind.POWER_LAW:
            if not self.r > 0:
                raise ValueError(f"power-law exponent must be positive, got {self.r}")
            if not self.eps0 > 0:
                raise ValueError(f"power-law amplitude must be positive, got {self.eps0}")

    @property
    def eps_max(self) -> float:
        if self.kind is EnvelopeKind.POWER_LAW:
            return max(1.0, self.eps0)
        return 1.0

    @property
    def u_start(self) -> float:
        """Largest u at which the envelope still sits at its initial value."""
        if self.kind is EnvelopeKind.SMOOTH_SINE:
            return -np.pi / 2
        if self.kind is EnvelopeKind.POWER_LAW:
            return -((self.eps_max / self.eps0) ** (1.0 / self.r))
        return -1.0

    @property
    def u_end(self) -> float:
        """Smallest u at which the envelope reaches zero."""
        if self.kind is EnvelopeKind.SMOOTH_SINE:
            return np.pi / 2
        return 0.0

    @property
    def near_end_amplitude(self) -> tuple[float, float]:
        """(eps0, r) of the power-law asymptote eps ~ eps0 (u_end - u)^r."""
        if self.kind is EnvelopeKind.SMOOTH_SINE:
            return 0.25, 2.0
        if self.kind is EnvelopeKind.POWER_LAW:
            return self.eps0, self.r
        return 1.0, 1.0

    def __call__(self, u):
        return envelope_value(self, u)


def envelope_value(env: RampEnvelope, u):
    """Envelope eps(u); scalar in, float out, array in, array out."""
    u = np.asarray(u, dtype=float)
    if env.kind is EnvelopeKind.SMOOTH_SINE:
        inner = 0.5 - 0.5 * np.sin(np.clip(u, -np.pi / 2, np.pi / 2))
        out = np.where(u <= -np.pi / 2, 1.0, np.where(u >= np.pi / 2, 0.0, inner))
    elif env.kind is EnvelopeKind.POWER_LAW:
        neg = np.minimum(u, 0.0)
        out = np.where(u <= 0.0, np.minimum(env.eps0 * np.abs(neg) ** env.r, env.eps_max), 0.0)
    else:
        out = np.clip(-u, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


class DriveMode(str, enum.Enum):
    UNIFORM = "uniform"
    INHOMOGENEOUS = "inhomogeneous"


@dataclass(frozen=True)
class RampDrive:
    envelope: RampEnvelope = field(default_factory=RampEnvelope)
    mode: DriveMode = DriveMode.UNIFORM
    tau: float = 1.0
    alpha: float = 1.0
    v: float = 1.0
    center: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", DriveMode(self.mode))
        if self.mode is DriveMode.UNIFORM:
            if not self.tau > 0:
                raise ValueError(f"tau must be positive, got {self.tau}")
        else:
            if not self.alpha > 0:
                raise ValueError(f"alpha must be positive, got {self.alpha}")
            if not self.v > 0:
                raise ValueError(f"v must be positive, got {self.v}")
        if self.center is not None:
            object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @classmethod
    def uniform(cls, tau, envelope=None):
        return cls(envelope=envelope or RampEnvelope(), mode=DriveMode.UNIFORM, tau=tau)

    @classmethod
    def inhomogeneous(cls, alpha, v, center=None, envelope=None):
        return cls(envelope=envelope or RampEnvelope(), mode=DriveMode.INHOMOGENEOUS,
                   alpha=alpha, v=v, center=center)

    @property
    def is_uniform(self) -> bool:
        return self.mode is DriveMode.UNIFORM

    def with_center(self, center):
        if self.is_uniform or self.center is not None:
            return self
        return RampDrive(self.envelope, self.mode, self.tau, self.alpha, self.v, tuple(center))

    def distances(self, coords):
        """Euclidean distance of each point (rows of coords) to the center."""
        if self.center is None:
            raise ValueError("inhomogeneous drive needs a center; use with_center()")
        xy = np.atleast_2d(np.asarray(coords, dtype=float))
        return np.hypot(xy[:, 0] - self.center[0], xy[:, 1] - self.center[1])

    def local_u(self, t, coords=None):
        if self.is_uniform:
            if coords is None:
                return t / self.tau
            return np.full(len(np.atleast_2d(coords)), t / self.tau)
        return self.alpha * (self.v * t - self.distances(coords))

    def eps(self, t, coords=None):
        return envelope_value(self.envelope, self.local_u(t, coords))

    def t_start(self) -> float:
        if self.is_uniform:
            return self.envelope.u_start * self.tau
        return self.envelope.u_start / (self.alpha * self.v)

    def t_end(self, max_distance: float = 0.0) -> float:
        if self.is_uniform:
            return self.envelope.u_end * self.tau
        return self.envelope.u_end / (self.alpha * self.v) + max_distance / self.v

    def duration(self, max_distance: float = 0.0) -> float:
        return self.t_end(max_distance) - self.t_start()


def square_corner_distance(L: int) -> float:
    return (L - 1) / np.sqrt(2.0)


def local_u(drive: RampDrive, t, s=None):
    return drive.local_u(t, s)


def total_time(drive: RampDrive, L: int | None = None, max_distance: float | None = None) -> float:
    """Ramp duration. Inhomogeneous drives need the farthest-point distance;
    when only L is given an L x L square lattice is assumed."""
    if L is not None and L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if drive.is_uniform:
        return drive.duration()
    if max_distance is None:
        if L is None:
            raise ValueError("inhomogeneous total time needs L or max_distance")
        max_distance = square_corner_distance(L)
    return drive.duration(max_distance)


@dataclass(frozen=True)
class KZExponents:
    z: float = 1.0
    nu: float = 1.0
    r: float = 2.0
    c: float = 1.0
    d_dim: int = 1

    def __post_init__(self):
        for name in ("z", "nu", "r", "c", "d_dim"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def xi_exponent(self) -> float:
        return self.r * self.nu / (1 + self.r * self.z * self.nu)

    @property
    def t_exponent(self) -> float:
        return self.r * self.z * self.nu / (1 + self.r * self.z * self.nu)


def kz_scales(exp: KZExponents, tau: float) -> dict:
    """Prefactor-free KZ scaling predictions (all prefactors set to 1)."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    xi = tau ** exp.xi_exponent
    k = 1.0 / xi
    return {
        "t_hat": tau ** exp.t_exponent,
        "xi_hat": xi,
        "k_hat": k,
        "v_hat": k ** (exp.z - 1),
        "rho_hat": xi ** (-exp.d_dim),
    }


def adiabatic_threshold(exp: KZExponents, L: float) -> float:
    """Scaling threshold L^(z + 1/(r nu)), prefactor 1."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    return float(L) ** (exp.z + 1.0 / (exp.r * exp.nu))
