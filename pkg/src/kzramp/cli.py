"""Command line front end: kzramp {run,sweep,fit,collapse,advantage,lz,plot}."""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import analysis, config, lzoracle, runner
from .plotting import PlotSpecError, plot_table

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _store(cfg, out):
    csv_path = out or cfg["output"]["csv"]
    return runner.ResultStore(csv_path, cfg["output"]["manifest"])


def _report(row):
    d = "" if row["d"] is None else f" d={row['d']:.6g}"
    f = "" if row["f"] is None else f" f={row['f']:.6g}"
    print(f"{row['run_id']} {row['model']} L={row['L']} tau_total={row.get('tau_total')}{d}{f} "
          f"[{row['status']}]", file=sys.stderr)


def cmd_run(args):
    cfg = config.load(args.config)
    if cfg["sweep"]:
        raise config.ConfigError("sweep: use the sweep subcommand for grids")
    store = _store(cfg, args.out)
    [row] = runner.run_grid([cfg], 1, store, force=True, progress=_report)
    return EXIT_OK if row["status"] == "ok" else EXIT_NUMERIC


def cmd_sweep(args):
    cfg = config.load(args.config)
    runs = config.expand(cfg)
    store = _store(cfg, args.out)
    workers = args.workers or cfg["workers"]
    rows = runner.run_grid(runs, workers, store, force=args.force, progress=_report)
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_NUMERIC


def _select(rows, filters):
    for f in filters or []:
        key, _, value = f.partition("=")
        rows = [r for r in rows if str(r.get(key)) == value or
                (isinstance(r.get(key), float) and np.isclose(r[key], float(value)))]
    return [r for r in rows if r.get("status", "ok") == "ok"]


def _xy(rows, x, y):
    pts = [(r[x], r[y]) for r in rows if r.get(x) is not None and r.get(y) is not None]
    if not pts:
        raise config.ConfigError(f"no rows with both {x} and {y}")
    xs, ys = np.array(sorted(pts)).T
    return xs, ys


def _emit(out, header, lines):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        for line in lines:
            w.writerow([runner.fmt(v) for v in line])
    finally:
        if out:
            fh.close()


def cmd_fit(args):
    rows = _select(runner.read_table(args.input), args.where)
    xs, ys = _xy(rows, args.x, args.y)
    fr = analysis.fit_power_law(xs, ys, args.window)
    _emit(args.out, ["exponent", "ci95", "prefactor", "x_min", "x_max", "residual_norm", "n"],
          [[fr.exponent, fr.ci95, fr.prefactor, fr.x_min, fr.x_max, fr.residual_norm, fr.n_points]])
    return EXIT_OK


def cmd_collapse(args):
    rows = _select(runner.read_table(args.input), args.where)
    data = {}
    for L in sorted({r["L"] for r in rows}):
        data[L] = _xy([r for r in rows if r["L"] == L], args.x, args.y)
    lines = []
    for a in args.a:
        for b in args.b:
            lines.append([a, b, analysis.scaling_collapse(data, a, b)])
    _emit(args.out, ["a", "b", "Q"], lines)
    return EXIT_OK


def cmd_advantage(args):
    rows = _select(runner.read_table(args.input), args.where)
    uni = [r for r in rows if r["mode"] == "uniform"]
    inh = [r for r in rows if r["mode"] == "inhomogeneous"]
    arr = lambda rs: _xy(rs, "tau_total", args.y) if rs else (np.array([]), np.array([]))
    table = analysis.advantage_table(arr(uni), arr(inh), args.targets)
    _emit(args.out, ["target", "tau_uniform", "tau_inhomo", "ratio"],
          [[t.target, t.tau_uniform, t.tau_inhomo, t.ratio] for t in table])
    return EXIT_OK


def cmd_lz(args):
    if args.constant:
        A = lzoracle.mode_integral_constant(args.r, args.eps0)
        _emit(args.out, ["r", "eps0", "A_r"], [[args.r, args.eps0, A]])
    elif args.theory:
        v = np.linspace(args.vmin, args.vmax, args.n)
        d = lzoracle.theory_density(v, args.alpha, args.c, args.r, args.A, strict=False)
        _emit(args.out, ["v", "d_theory"], zip(v, d))
    else:
        deltas = np.geomspace(args.dmin, args.dmax, args.n)
        _emit(args.out, ["delta", "p"], lzoracle.lz_table(args.r, deltas))
    return EXIT_OK


def cmd_plot(args):
    table = runner.read_table(args.input)
    rows = _select(table, args.where)
    theory = None
    if args.theory:
        theory = {"A": args.theory[0], "c": args.theory[1], "r": args.r}
    out = args.out or str(Path(args.input).with_suffix(".svg"))
    plot_table(rows, out, args.x, args.y, args.group, args.logx, args.logy, theory,
               columns=runner.COLUMNS)
    print(out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="kzramp", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("run", help="run one configured simulation")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="CSV path (overrides output.csv)")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="run the Cartesian grid of a config")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--workers", type=int)
    s.add_argument("--force", action="store_true", help="rerun finished ids")
    s.set_defaults(func=cmd_sweep)

    def table_args(s, y="d"):
        s.add_argument("input", help="result CSV")
        s.add_argument("--y", default=y)
        s.add_argument("--where", action="append", metavar="COL=VALUE")
        s.add_argument("--out")

    s = sub.add_parser("fit", help="power-law fit of y against x")
    table_args(s)
    s.add_argument("--x", default="tau_total")
    s.add_argument("--window", type=float, nargs=2, metavar=("XMIN", "XMAX"))
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("collapse", help="finite-size collapse quality over exponent pairs")
    table_args(s)
    s.add_argument("--x", default="tau_total")
    s.add_argument("--a", type=float, nargs="+", required=True)
    s.add_argument("--b", type=float, nargs="+", required=True)
    s.set_defaults(func=cmd_collapse)

    s = sub.add_parser("advantage", help="uniform vs inhomogeneous time to reach targets")
    table_args(s)
    s.add_argument("--targets", type=float, nargs="+", default=[1e-3, 1e-4])
    s.set_defaults(func=cmd_advantage)

    s = sub.add_parser("lz", help="Landau-Zener tables, constants and theory curves")
    s.add_argument("--r", type=float, default=2.0)
    s.add_argument("--dmin", type=float, default=0.03)
    s.add_argument("--dmax", type=float, default=100.0)
    s.add_argument("--n", type=int, default=30)
    s.add_argument("--constant", action="store_true", help="print A_r for --eps0")
    s.add_argument("--eps0", type=float, default=lzoracle.SMOOTH_EPS0)
    s.add_argument("--theory", action="store_true", help="emit d(v) on [vmin, vmax]")
    s.add_argument("--alpha", type=float, default=1 / 16)
    s.add_argument("--c", type=float, default=2.0)
    s.add_argument("--A", type=float, default=0.045)
    s.add_argument("--vmin", type=float, default=2.0)
    s.add_argument("--vmax", type=float, default=8.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_lz)

    s = sub.add_parser("plot", help="SVG plot of a result table")
    s.add_argument("input")
    s.add_argument("--x", default="tau_total")
    s.add_argument("--y", default="d")
    s.add_argument("--group")
    s.add_argument("--where", action="append", metavar="COL=VALUE")
    s.add_argument("--logx", action="store_true")
    s.add_argument("--logy", action="store_true")
    s.add_argument("--theory", type=float, nargs=2, metavar=("A", "C"),
                   help="overlay the supersonic curve (x must be v, group alpha)")
    s.add_argument("--r", type=float, default=2.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (config.ConfigError, PlotSpecError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
