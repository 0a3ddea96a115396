"""Ordinary least squares of one series on another."""
# pylint: disable=redefined-builtin
from builtins import object

import numpy as np

from freightecon.errors import DomainError


class OlsFit(object):
    """
    ``y ~ intercept + slope * x``.

    When ``y`` is constant the slope is 0 and ``r2`` is 1 if every residual is 0, else 0.
    """

    def __init__(self, slope, intercept, r2, n, residuals):
        self.slope = slope
        self.intercept = intercept
        self.r2 = r2
        self.n = n
        self.residuals = tuple(residuals)
        """``y - y_hat`` per point."""

    @property
    def residual_max(self):
        return max(abs(r) for r in self.residuals)

    def predict(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float)

    def to_json(self):
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2,
                "n": self.n, "residuals": list(self.residuals)}

    def __repr__(self):
        return "OlsFit(slope=%r, intercept=%r, r2=%r, n=%r)" % \
               (self.slope, self.intercept, self.r2, self.n)


def ols_fit(x, y):
    """
    Closed-form simple regression on centered data.

    :raises DomainError: fewer than two points, unequal lengths, or constant ``x``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DomainError("x and y must be series of equal length",
                          {"x": x.shape, "y": y.shape})
    n = len(x)
    if n < 2:
        raise DomainError("Regression needs at least two points", {"n": n})
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("Regression inputs must be finite")
    if np.all(x == x[0]):
        raise DomainError("Degenerate design: x has zero variance", {"x": float(x[0])})

    if np.all(y == y[0]):
        residuals = np.zeros(n)
        return OlsFit(0.0, float(y[0]), 1.0, n, residuals)

    x_mean, y_mean = x.mean(), y.mean()
    dx, dy = x - x_mean, y - y_mean
    slope = float(np.dot(dx, dy) / np.dot(dx, dx))
    intercept = float(y_mean - slope * x_mean)
    residuals = dy - slope * dx
    ss_res = float(np.dot(residuals, residuals))
    ss_tot = float(np.dot(dy, dy))
    r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return OlsFit(slope, intercept, r2, n, residuals.tolist())
