"""Log-log power-law fits."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DegenerateFit(ValueError):
    pass


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    points: tuple = field(default=(), repr=False)

    @property
    def constant(self) -> float:
        return float(np.exp(self.intercept))

    def predict(self, x) -> np.ndarray:
        return np.exp(self.intercept) * np.asarray(x, dtype=float) ** self.slope


def fit_exponent(data) -> ExponentFit:
    """Least-squares fit of log(value) = slope * log(x) + intercept.

    ``data`` is a sequence of (x, value) pairs with x > 0 distinct and
    value > 0.
    """
    pts = [(float(x), float(v)) for x, v in data]
    if len(pts) < 3:
        raise DegenerateFit("need at least 3 points")
    xs = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if len(set(xs.tolist())) != len(xs):
        raise DegenerateFit("abscissae must be distinct")
    if np.any(xs <= 0) or np.any(vs <= 0):
        raise DegenerateFit("log fit needs positive data")
    lx, lv = np.log(xs), np.log(vs)
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(A, lv, rcond=None)
    resid = lv - (slope * lx + intercept)
    ss_tot = float(np.sum((lv - lv.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, min(1.0, 1 - float(resid @ resid) / ss_tot))
    return ExponentFit(float(slope), float(intercept), r2, tuple(pts))
