"""SVG figures from result tables."""
from __future__ import annotations

from collections import OrderedDict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lzoracle import theory_density  # noqa: E402


class PlotSpecError(KeyError):
    pass


def _series(rows, x, y, group):
    out = OrderedDict()
    for r in rows:
        if r.get(x) is None or r.get(y) is None:
            continue
        key = r.get(group) if group else ""
        out.setdefault(key, []).append((r[x], r[y]))
    for k in out:
        out[k].sort()
    return out


def plot_table(rows, out_path, x="tau_total", y="d", group=None, logx=False, logy=False,
               theory=None, title=None, columns=None):
    """Line plot of y against x, one series per value of ``group``.

    ``theory`` = {"c": ..., "r": ..., "A": ...} overlays the supersonic
    density curve for every alpha series (x must be the velocity v).
    ``columns`` lists the table's columns when rows may be empty.
    """
    cols = set(columns or [])
    for r in rows:
        cols |= set(r)
    for c in (x, y) + ((group,) if group else ()):
        if c not in cols:
            raise PlotSpecError(f"missing column: {c}")
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    for key, pts in _series(rows, x, y, group).items():
        xs, ys = np.array(pts).T
        label = f"{group}={key}" if group else None
        ax.plot(xs, ys, "o-", ms=3, label=label)
        if theory is not None and group == "alpha" and key is not None:
            vv = np.linspace(max(theory["c"] * 1.0001, xs.min()), xs.max(), 200)
            ax.plot(vv, theory_density(vv, float(key), theory["c"], theory.get("r", 2.0),
                                       theory["A"]), "k--", lw=0.8)
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    if title:
        ax.set_title(title)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path, format="svg")
    plt.close(fig)
    return out_path
