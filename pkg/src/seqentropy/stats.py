"""Z-scores of real entropy against a randomized ensemble, and linear trends."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["zscore", "zscore_series", "ZScoreSeries", "TrendFit", "linear_trend"]


def zscore(s, mu, sigma):
    """``(s - mu) / sigma``.

    With ``sigma == 0`` the result is 0 when ``s == mu`` and NaN (undefined)
    otherwise. Works elementwise on arrays.
    """
    if all(isinstance(v, (int, float, np.integer, np.floating)) for v in (s, mu, sigma)):
        if sigma > 0:
            return float((s - mu) / sigma)
        return 0.0 if s == mu else math.nan
    s, mu, sigma = np.broadcast_arrays(*(np.asarray(v, dtype=np.float64) for v in (s, mu, sigma)))
    diff = s - mu
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sigma > 0, diff / np.where(sigma > 0, sigma, 1.0),
                     np.where(diff == 0, 0.0, np.nan))
    return float(z) if z.ndim == 0 else z


@dataclass
class ZScoreSeries:
    """Z value per checkpoint; NaN marks an undefined point."""

    measure: str
    checkpoints: np.ndarray
    timestamps: np.ndarray
    values: np.ndarray

    @property
    def defined(self):
        return ~np.isnan(self.values)

    def __len__(self):
        return len(self.values)


def zscore_series(real, stats, measure: str = "S2", checkpoints=None) -> ZScoreSeries:
    """Pointwise Z-score of a real entropy series against ensemble statistics.

    ``real`` is either an array aligned with ``stats.checkpoints`` or a
    mapping from measure name to such an array. When ``checkpoints`` is
    given it must equal the ensemble's checkpoints.
    """
    if checkpoints is not None and not np.array_equal(np.asarray(checkpoints), stats.checkpoints):
        raise ValueError("real series and ensemble statistics use different checkpoints")
    values = real[measure] if isinstance(real, dict) else real
    values = np.asarray(values, dtype=np.float64)
    if values.shape != stats.checkpoints.shape:
        raise ValueError(
            f"real series has {len(values)} points, ensemble has {len(stats.checkpoints)}")
    z = zscore(values, stats.mean[measure], stats.std[measure])
    return ZScoreSeries(measure, stats.checkpoints, stats.timestamps, np.atleast_1d(z))


@dataclass(frozen=True)
class TrendFit:
    slope: float
    intercept: float
    residual_std: float
    n_points: int

    def __call__(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=np.float64)


def linear_trend(values, x=None) -> TrendFit:
    """Ordinary least-squares line through ``(x, values)``.

    ``x`` defaults to the positions ``0, 1, 2, ...``. NaN values are
    skipped. The residual deviation uses ``n - 2`` degrees of freedom
    (0 for two points).
    """
    y = np.asarray(values, dtype=np.float64)
    x = np.arange(len(y), dtype=np.float64) if x is None else np.asarray(x, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("x and values differ in length")
    keep = ~np.isnan(y)
    x, y = x[keep], y[keep]
    n = len(y)
    if n < 2:
        raise ValueError("a trend needs at least two defined points")
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx == 0:
        raise ValueError("all x values are equal")
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    ssr = float(resid @ resid)
    rstd = math.sqrt(ssr / (n - 2)) if n > 2 else 0.0
    return TrendFit(slope, intercept, rstd, n)
