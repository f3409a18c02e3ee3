"""Adiabatic ramps across quantum critical points: free-fermion and small
state-vector simulators, Landau-Zener theory curves and scaling analysis."""

from .schedule import (EnvelopeKind, KZExponents, RampDrive, RampEnvelope, adiabatic_threshold,
                       envelope_value, kz_scales, local_u, total_time)
from .models import (QuadraticModel, build_bdg, dispersion, fermi_points, ising_chain, kitaev,
                     pwave, sound_speeds)
from .bdg import (BogoliubovModes, evolve, excitation_density, excitation_energy, ground_modes,
                  model_ground_modes, simulate)

__all__ = ["EnvelopeKind", "KZExponents", "RampDrive", "RampEnvelope", "adiabatic_threshold",
           "envelope_value", "kz_scales", "local_u", "total_time", "QuadraticModel", "build_bdg",
           "dispersion", "fermi_points", "ising_chain", "kitaev", "pwave", "sound_speeds",
           "BogoliubovModes", "evolve", "excitation_density", "excitation_energy", "ground_modes",
           "model_ground_modes", "simulate"]
__version__ = "0.1.0"
