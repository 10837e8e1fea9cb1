"""Linear-fit protocols used in the reports.

``proportional_fit`` is the zero-intercept regression y ~ alpha x used to
summarize 1-norm improvements across molecules; ``scaling_fit`` is the
ordinary log10-log10 regression used for system-size scaling studies.
"""

from __future__ import annotations

import dataclasses

import numpy as np

__all__ = ["FitResult", "proportional_fit", "scaling_fit"]


@dataclasses.dataclass(frozen=True)
class FitResult:
    slope: float
    stderr: float
    intercept: float | None = None
    r_squared: float | None = None

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")


def _as_arrays(xs, ys):
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    if xs.size != ys.size or xs.size == 0:
        raise ValueError(f"need equal nonzero lengths, got {xs.size} and {ys.size}")
    return xs, ys


def proportional_fit(xs, ys) -> FitResult:
    """Least-squares slope of y ~ alpha x with its standard error.

    alpha = sum(x y) / sum(x^2); the stderr uses the n - 1 residual degrees
    of freedom of the one-parameter model.
    """
    xs, ys = _as_arrays(xs, ys)
    sxx = float(np.dot(xs, xs))
    if sxx == 0.0:
        raise ValueError("degenerate fit: all x values are zero")
    alpha = float(np.dot(xs, ys)) / sxx
    residuals = ys - alpha * xs
    dof = xs.size - 1
    variance = float(np.dot(residuals, residuals)) / dof if dof > 0 else 0.0
    return FitResult(slope=alpha, stderr=float(np.sqrt(variance / sxx)))


def scaling_fit(sizes, lambdas) -> FitResult:
    """Ordinary least squares of log10(lambda) against log10(size)."""
    xs, ys = _as_arrays(sizes, lambdas)
    if xs.size < 2:
        raise ValueError("scaling fit needs at least two points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("scaling fit requires positive sizes and positive 1-norms")
    lx = np.log10(xs)
    ly = np.log10(ys)
    x_mean = lx.mean()
    y_mean = ly.mean()
    sxx = float(np.dot(lx - x_mean, lx - x_mean))
    if sxx == 0.0:
        raise ValueError("degenerate fit: all sizes identical")
    slope = float(np.dot(lx - x_mean, ly - y_mean)) / sxx
    intercept = y_mean - slope * x_mean
    residuals = ly - (slope * lx + intercept)
    ssr = float(np.dot(residuals, residuals))
    sst = float(np.dot(ly - y_mean, ly - y_mean))
    dof = lx.size - 2
    variance = ssr / dof if dof > 0 else 0.0
    r_squared = 1.0 - ssr / sst if sst > 0 else 1.0
    return FitResult(
        slope=slope,
        stderr=float(np.sqrt(variance / sxx)),
        intercept=float(intercept),
        r_squared=float(r_squared),
    )
