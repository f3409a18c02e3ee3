"""Run configuration: YAML loading, validation and object construction."""
from __future__ import annotations

import copy
import hashlib
import itertools
import json
from pathlib import Path

import yaml

from . import bdg
from .exactspin import G_CRITICAL_2D, MAX_SPINS, SpinLattice2D
from .models import make_model
from .schedule import RampDrive, RampEnvelope

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


# key -> (types, default); None default means optional
_NUM = (int, float)
SCHEMA = {
    "version": {"": ((int,), SCHEMA_VERSION)},
    "model": {
        "kind": ((str,), "ising"),
        "L": ((int,), 16),
        "Lx": ((int,), None),
        "Ly": ((int,), None),
        "binding": ((str,), "main"),
        "boundary": ((str,), "open"),
        "gamma": (_NUM, 1.0),
        "lambda_i": (_NUM, 2.0),
        "lambda_f": (_NUM, 1.0),
        "Ji": (_NUM, 4.0),
        "Jf": (_NUM, 2.0),
        "Jx": (_NUM, 1.0),
        "Jy": (_NUM, 1.0),
        "g_c": (_NUM, None),
    },
    "envelope": {
        "kind": ((str,), "smooth_sine"),
        "r": (_NUM, 2.0),
        "eps0": (_NUM, 1.0),
    },
    "drive": {
        "mode": ((str,), "uniform"),
        "tau": (_NUM, 1.0),
        "alpha": (_NUM, 1.0),
        "v": (_NUM, 1.0),
        "center": ((list,), None),
    },
    "integrator": {
        "dt": (_NUM, bdg.DEFAULT_DT),
        "scheme": ((str,), bdg.DEFAULT_SCHEME),
        "output_stride": ((int,), 0),
    },
    "observables": {"": ((list,), ["d", "e"])},
    "output": {
        "csv": ((str,), "results.csv"),
        "manifest": ((str,), None),
        "snapshot": ((str,), None),
    },
    "sweep": {"": ((dict,), {})},
    "workers": {"": ((int,), 1)},
}

MODEL_KINDS = ("ising", "pwave", "kitaev", "ising2d")
OBSERVABLES = ("d", "e", "f")
# keys that define the physics of a run (and hence its id)
PHYSICS_BLOCKS = ("model", "envelope", "drive", "integrator", "observables")


def _check_type(key, value, types):
    if isinstance(value, bool) or not isinstance(value, types):
        names = "/".join(t.__name__ for t in types)
        raise ConfigError(f"{key}: expected {names}, got {type(value).__name__}")


def validate(raw: dict) -> dict:
    """Fill defaults, reject unknown keys and bad types; returns a new dict."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    cfg = {}
    for key in raw:
        if key not in SCHEMA:
            raise ConfigError(f"unknown key: {key}")
    for block, fields in SCHEMA.items():
        if "" in fields:
            types, default = fields[""]
            value = raw.get(block, copy.deepcopy(default))
            _check_type(block, value, types)
            cfg[block] = value
            continue
        given = raw.get(block) or {}
        if not isinstance(given, dict):
            raise ConfigError(f"{block}: expected a mapping")
        out = {}
        for key in given:
            if key not in fields:
                raise ConfigError(f"unknown key: {block}.{key}")
        for key, (types, default) in fields.items():
            if key in given and given[key] is not None:
                _check_type(f"{block}.{key}", given[key], types)
                out[key] = float(given[key]) if types is _NUM else given[key]
            else:
                out[key] = default
        cfg[block] = out
    if cfg["version"] != SCHEMA_VERSION:
        raise ConfigError(f"version: unsupported schema version {cfg['version']}")
    m = cfg["model"]
    if m["kind"] not in MODEL_KINDS:
        raise ConfigError(f"model.kind: must be one of {MODEL_KINDS}")
    if m["boundary"] not in ("open", "periodic"):
        raise ConfigError("model.boundary: must be open or periodic")
    if m["binding"] not in ("main", "field"):
        raise ConfigError("model.binding: must be main or field")
    if m["L"] < 1:
        raise ConfigError("model.L: must be >= 1")
    for o in cfg["observables"]:
        if o not in OBSERVABLES:
            raise ConfigError(f"observables: unknown observable {o!r}")
    if cfg["integrator"]["scheme"] not in bdg.SCHEMES:
        raise ConfigError(f"integrator.scheme: must be one of {bdg.SCHEMES}")
    if not cfg["integrator"]["dt"] > 0:
        raise ConfigError("integrator.dt: must be positive")
    if cfg["workers"] < 1:
        raise ConfigError("workers: must be >= 1")
    for axis, values in cfg["sweep"].items():
        parts = axis.split(".")
        if len(parts) != 2 or parts[0] not in PHYSICS_BLOCKS or parts[0] == "observables" \
                or parts[1] not in SCHEMA[parts[0]]:
            raise ConfigError(f"unknown key: sweep.{axis}")
        if not isinstance(values, list) or not values:
            raise ConfigError(f"sweep.{axis}: expected a nonempty list")
    # constructing the objects surfaces remaining range errors
    try:
        build_drive(cfg)
        if m["kind"] == "ising2d":
            build_spin_lattice(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def load(path) -> dict:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    return validate(raw or {})


def build_drive(cfg) -> RampDrive:
    e, d = cfg["envelope"], cfg["drive"]
    env = RampEnvelope(e["kind"], e["r"], e["eps0"])
    if d["mode"] == "uniform":
        return RampDrive.uniform(d["tau"], env)
    if d["mode"] == "inhomogeneous":
        return RampDrive.inhomogeneous(d["alpha"], d["v"], d["center"], env)
    raise ValueError(f"drive.mode: must be uniform or inhomogeneous, got {d['mode']!r}")


def build_model(cfg):
    m = cfg["model"]
    periodic = m["boundary"] == "periodic"
    if m["kind"] == "ising":
        return make_model("ising", m["L"], binding=m["binding"], periodic=periodic)
    if m["kind"] == "pwave":
        return make_model("pwave", m["L"], gamma=m["gamma"], lambda_i=m["lambda_i"],
                          lambda_f=m["lambda_f"], periodic=periodic)
    if m["kind"] == "kitaev":
        if periodic:
            raise ConfigError("model.boundary: the hexagon flake is open only")
        return make_model("kitaev", m["L"], Jx=m["Jx"], Jy=m["Jy"], Ji=m["Ji"], Jf=m["Jf"])
    raise ConfigError(f"model.kind {m['kind']!r} is not a quadratic model")


def build_spin_lattice(cfg) -> SpinLattice2D:
    m = cfg["model"]
    Lx = m["Lx"] or m["L"]
    Ly = m["Ly"] or m["L"]
    if Lx * Ly > MAX_SPINS:
        raise ValueError(f"model: {Lx}x{Ly} exceeds the {MAX_SPINS}-spin cap")
    g_c = m["g_c"] if m["g_c"] is not None else (1.0 if Ly == 1 else G_CRITICAL_2D)
    return SpinLattice2D(Lx, Ly, g_c)


def run_id(cfg) -> str:
    key = {b: cfg[b] for b in PHYSICS_BLOCKS}
    blob = json.dumps(key, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def expand(cfg) -> list:
    """Single-run configs of the sweep grid, in grid order (last axis fastest)."""
    axes = list(cfg["sweep"].items())
    base = copy.deepcopy(cfg)
    base["sweep"] = {}
    if not axes:
        return [base]
    runs = []
    for combo in itertools.product(*[vals for _, vals in axes]):
        c = copy.deepcopy(base)
        for (axis, _), value in zip(axes, combo):
            block, key = axis.split(".")
            c[block][key] = value
        runs.append(validate(c))
    return runs
