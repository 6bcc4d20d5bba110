"""Exponential-fitting weight for the two-point time derivative.

The weight ``alpha`` makes

    alpha * (u(t + dt) - u(t)) = dt/2 * (u'(t + dt) + u'(t))

exact on ``span{1, cos(omega t), sin(omega t)}``. Closed form
``alpha = theta (1 + cos theta) / (2 sin theta)`` with ``theta = omega dt``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["FitParams", "alpha", "check_fitting_exactness", "SERIES_CROSSOVER"]

#: Below this ``|omega dt|`` the truncated Taylor series replaces the closed form.
SERIES_CROSSOVER = 1e-4


@dataclass(frozen=True)
class FitParams:
    omega: float
    dt: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and math.isfinite(self.dt)):
            raise DomainError("fitting parameters must be finite")
        if self.omega < 0 or self.dt <= 0:
            raise DomainError("need omega >= 0 and dt > 0")
        if self.omega * self.dt >= math.pi:
            raise DomainError(f"fitting pole: omega*dt = {self.omega * self.dt!r} >= pi")

    @property
    def theta(self) -> float:
        return self.omega * self.dt


def _alpha_theta(theta: float) -> float:
    # even in theta; no sign check here so the series branch can be probed directly
    if abs(theta) < SERIES_CROSSOVER:
        t2 = theta * theta
        return 1.0 - t2 / 12.0 - t2 * t2 / 720.0
    return theta * (1.0 + math.cos(theta)) / (2.0 * math.sin(theta))


def alpha(params: FitParams) -> float:
    """Fitting weight for ``params``; equals 1 for ``omega = 0``."""
    return _alpha_theta(params.theta)


def check_fitting_exactness(params: FitParams, t: float) -> float:
    """Largest defect of the fitted two-point rule over the basis ``{1, cos, sin}``.

    The constant function gives an identically zero defect, so only the two
    trigonometric members are evaluated.
    """
    a = alpha(params)
    w, h = params.omega, params.dt
    worst = 0.0
    for f, df in (
        (lambda s: np.cos(w * s), lambda s: -w * np.sin(w * s)),
        (lambda s: np.sin(w * s), lambda s: w * np.cos(w * s)),
    ):
        defect = a * (f(t + h) - f(t)) - 0.5 * h * (df(t + h) + df(t))
        worst = max(worst, abs(float(defect)))
    return worst
