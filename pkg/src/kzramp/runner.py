"""Execute validated configs and persist result rows (CSV plus JSON manifest)."""
from __future__ import annotations

import csv
import json
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import bdg, config, exactspin

COLUMNS = ["run_id", "model", "L", "alpha", "v", "tau_total", "dt", "d", "e", "f",
           "wall_time", "mode", "tau", "residual", "status"]
FLOAT_COLUMNS = {"alpha", "v", "tau_total", "dt", "d", "e", "f", "wall_time", "tau", "residual"}


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if np.isinf(value):
            return "inf" if value > 0 else "-inf"
        return "%.17g" % value
    return str(value)


def execute(cfg: dict) -> dict:
    """Run one validated single-point config; never raises on numerical failure."""
    rid = config.run_id(cfg)
    m, d = cfg["model"], cfg["drive"]
    inhomo = d["mode"] == "inhomogeneous"
    row = {"run_id": rid, "model": m["kind"], "L": m["L"],
           "alpha": float(d["alpha"]) if inhomo else None,
           "v": float(d["v"]) if inhomo else None,
           "tau_total": None, "dt": float(cfg["integrator"]["dt"]),
           "d": None, "e": None, "f": None, "wall_time": None,
           "mode": d["mode"], "tau": None if inhomo else float(d["tau"]), "residual": None,
           "status": "ok"}
    start = time.perf_counter()
    want = set(cfg["observables"])
    try:
        drive = config.build_drive(cfg)
        if m["kind"] == "ising2d":
            lat = config.build_spin_lattice(cfg)
            rec = exactspin.simulate_spin(lat, drive, cfg["integrator"]["dt"],
                                          cfg["integrator"]["scheme"])
            row.update(tau_total=rec.tau_total, e=rec.e, f=rec.f, L=lat.Lx, residual=rec.residual)
        else:
            model = config.build_model(cfg)
            rec = bdg.simulate(model, drive, cfg["integrator"]["dt"], cfg["integrator"]["scheme"],
                               fidelity="f" in want,
                               keep_occupations=cfg["output"]["snapshot"] is not None)
            row.update(tau_total=rec.tau_total, d=rec.d, e=rec.e, f=rec.f, residual=rec.residual)
            if cfg["output"]["snapshot"]:
                _write_snapshot(cfg["output"]["snapshot"], rid, model, rec.occupations)
        for obs in ("d", "e", "f"):
            if obs not in want:
                row[obs] = None
    except (bdg.ConstraintDriftError, bdg.NonFiniteError, exactspin.NormDriftError,
            exactspin.ConvergenceError, FloatingPointError, np.linalg.LinAlgError) as exc:
        row["status"] = f"numerical: {exc}".replace("\n", " ")
    except Exception as exc:  # sweep isolation: record and continue
        row["status"] = f"error: {type(exc).__name__}: {exc}".replace("\n", " ")
        row["traceback"] = traceback.format_exc()
    row["wall_time"] = time.perf_counter() - start
    return row


def _write_snapshot(path, rid, model, occ):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    new = not path.exists()
    with path.open("a", newline="") as fh:
        w = csv.writer(fh)
        if new:
            w.writerow(["run_id", "mode_index", "occupation"])
        for k, n in enumerate(occ):
            w.writerow([rid, k, "%.17g" % n])


class ResultStore:
    """CSV table mirrored by a manifest {run_id: row}; rows keep first-seen order."""

    def __init__(self, csv_path, manifest_path=None):
        self.csv_path = Path(csv_path)
        self.manifest_path = Path(manifest_path) if manifest_path else \
            self.csv_path.with_suffix(self.csv_path.suffix + ".manifest.json")
        self.rows = {}
        if self.manifest_path.exists():
            self.rows = json.loads(self.manifest_path.read_text())

    def get(self, rid):
        return self.rows.get(rid)

    def done(self, rid) -> bool:
        row = self.rows.get(rid)
        return row is not None and row.get("status") == "ok"

    def put(self, row):
        row = {k: row.get(k) for k in COLUMNS}
        self.rows[row["run_id"]] = row

    def save(self, order=None):
        self.csv_path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.manifest_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(self.rows, indent=1))
        os.replace(tmp, self.manifest_path)
        ids = [r for r in (order or []) if r in self.rows]
        seen = set(ids)
        ids += [r for r in self.rows if r not in seen]
        with self.csv_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(COLUMNS)
            for rid in ids:
                w.writerow([fmt(self.rows[rid][c]) for c in COLUMNS])


def run_grid(runs: list, workers: int = 1, store: ResultStore | None = None,
             force: bool = False, progress=None) -> list:
    """Execute configs (skipping finished ids unless forced); rows in grid order."""
    ids = [config.run_id(c) for c in runs]
    todo = [(i, c) for i, (rid, c) in enumerate(zip(ids, runs))
            if force or store is None or not store.done(rid)]
    results = {}
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for (i, _), row in zip(todo, pool.map(execute, [c for _, c in todo])):
                results[i] = row
                if store is not None:
                    store.put(row)
                if progress:
                    progress(row)
    else:
        for i, c in todo:
            row = execute(c)
            results[i] = row
            if store is not None:
                store.put(row)
                store.save(ids)
            if progress:
                progress(row)
    rows = []
    for i, rid in enumerate(ids):
        rows.append(results[i] if i in results else store.get(rid))
    if store is not None:
        store.save(ids)
    return rows


def read_table(path) -> list:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for k in list(r):
            if k in FLOAT_COLUMNS:
                r[k] = float(r[k]) if r[k] not in ("", None) else None
            elif k == "L":
                r[k] = int(r[k]) if r[k] else None
    return rows
