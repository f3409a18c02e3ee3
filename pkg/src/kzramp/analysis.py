"""Power-law fits, finite-size scaling collapse and strategy comparison tables."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.interpolate import PchipInterpolator

UNREACHABLE = float("inf")
KZ_WINDOW_THRESHOLD = 0.2


@dataclass(frozen=True)
class FitResult:
    exponent: float
    ci95: float
    prefactor: float
    x_min: float
    x_max: float
    residual_norm: float
    n_points: int

    def contains(self, value: float, tol: float) -> bool:
        return abs(self.exponent - value) <= tol


def fit_power_law(x, y, window=None) -> FitResult:
    """Least squares of ln y on ln x; ci95 is the t-quantile times the slope's standard error."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same length")
    if window is not None:
        lo, hi = window
        m = (x >= lo) & (x <= hi)
        x, y = x[m], y[m]
    if len(x) < 4:
        raise ValueError(f"need at least 4 points in the fit window, got {len(x)}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit needs positive data")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise ValueError("degenerate fit window")
    res = stats.linregress(lx, ly)
    resid = ly - (res.intercept + res.slope * lx)
    tq = stats.t.ppf(0.975, len(x) - 2)
    return FitResult(float(res.slope), float(tq * res.stderr), float(np.exp(res.intercept)),
                     float(x.min()), float(x.max()), float(np.linalg.norm(resid)), len(x))


def linear_window(x, y, span: float, min_points: int = 4) -> tuple[float, float]:
    """Most nearly straight stretch of a log-log curve.

    Scans contiguous windows whose x range covers at least a factor ``span``
    (the shortest such window for each left edge) and returns the (x_min,
    x_max) with the smallest rms residual of the power-law fit.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    order = np.argsort(x)
    x, y = x[order], y[order]
    best, best_rms = None, np.inf
    for i in range(len(x)):
        j = np.searchsorted(x, x[i] * span * (1 - 1e-9))
        j = max(j, i + min_points - 1)
        if j >= len(x):
            break
        fr = fit_power_law(x[i:j + 1], y[i:j + 1])
        rms = fr.residual_norm / np.sqrt(fr.n_points)
        if rms < best_rms:
            best, best_rms = (float(x[i]), float(x[j])), rms
    if best is None:
        raise ValueError(f"data do not cover a factor {span} with {min_points} points")
    return best


def kz_window(L: float, z: float, nu: float, r: float, threshold: float = KZ_WINDOW_THRESHOLD):
    """Upper ramp time of the KZ regime: threshold * L^(z + 1/(r nu))."""
    return threshold * float(L) ** (z + 1.0 / (r * nu))


def _loglog_interp(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    order = np.argsort(x)
    x, y = x[order], y[order]
    keep = np.concatenate([[True], np.diff(x) > 0])
    return PchipInterpolator(np.log(x[keep]), np.log(y[keep]), extrapolate=False), x[keep]


def scaling_collapse(datasets: dict, a: float, b: float, n_grid: int = 64) -> float:
    """Collapse quality of curves {L: (tau, y)} rescaled to (L^-b tau, L^a y).

    Each curve is interpolated monotonically in log-log space onto a common
    grid covering the overlap of all rescaled ranges; Q is the mean over the
    grid of the variance across curves of ln(L^a y). Lower is better.
    """
    if len({float(L) for L in datasets}) < 2:
        raise ValueError("collapse needs at least two distinct sizes")
    curves = []
    lo, hi = -np.inf, np.inf
    for L, (tau, y) in datasets.items():
        tau = np.asarray(tau, float)
        y = np.asarray(y, float)
        xs = tau * float(L) ** (-b)
        ys = y * float(L) ** a
        f, xk = _loglog_interp(xs, ys)
        curves.append(f)
        lo, hi = max(lo, np.log(xk[0])), min(hi, np.log(xk[-1]))
    if not hi > lo:
        raise ValueError("rescaled curves do not overlap")
    grid = np.linspace(lo, hi, n_grid)
    vals = np.array([f(grid) for f in curves])
    return float(np.mean(np.var(vals, axis=0)))


def collapse_scan(datasets: dict, a_values, b_values) -> np.ndarray:
    return np.array([[scaling_collapse(datasets, a, b) for b in b_values] for a in a_values])


def _first_crossing(tau, d, target):
    """Smallest tau at which the running-minimum envelope of d reaches target."""
    tau = np.asarray(tau, float)
    d = np.asarray(d, float)
    order = np.argsort(tau)
    tau, d = tau[order], d[order]
    env = np.minimum.accumulate(d)
    hit = np.nonzero(env <= target)[0]
    if not len(hit):
        return UNREACHABLE
    k = hit[0]
    if k == 0 or env[k] <= 0:
        return float(tau[k])
    # log-log linear interpolation on the envelope between the bracketing samples
    x0, x1 = np.log(tau[k - 1]), np.log(tau[k])
    y0, y1 = np.log(env[k - 1]), np.log(env[k])
    s = (np.log(target) - y0) / (y1 - y0)
    return float(np.exp(x0 + s * (x1 - x0)))


@dataclass(frozen=True)
class AdvantageRow:
    target: float
    tau_uniform: float
    tau_inhomo: float
    ratio: float


def advantage_table(uniform, inhomo, targets) -> list:
    """Speedup tau_uniform / tau_inhomo to reach each target density.

    ``uniform`` and ``inhomo`` are (tau_total, d) pairs of arrays. A target
    below a strategy's data range is unreachable (inf) and its ratio is nan.
    """
    out = []
    for t in targets:
        tu = _first_crossing(*uniform, t) if len(uniform[0]) else UNREACHABLE
        ti = _first_crossing(*inhomo, t) if len(inhomo[0]) else UNREACHABLE
        ratio = tu / ti if np.isfinite(tu) and np.isfinite(ti) else float("nan")
        out.append(AdvantageRow(float(t), tu, ti, ratio))
    return out
