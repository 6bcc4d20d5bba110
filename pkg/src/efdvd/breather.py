"""Exact NLS breather, solution error and observed convergence order."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .grid import ComplexField

__all__ = [
    "BreatherParams",
    "breather",
    "breather_field",
    "sol_err",
    "OrderEstimate",
    "order_estimate",
]


@dataclass(frozen=True)
class BreatherParams:
    beta: float = 1.4
    omega: float = 25.0

    def __post_init__(self):
        if not (0.0 < self.beta < math.sqrt(2.0)):
            raise DomainError("breather needs 0 < beta < sqrt(2)")
        if not self.omega > 0:
            raise DomainError("breather needs omega > 0")


def _envelope(params: BreatherParams, x, t):
    b, w = params.beta, params.omega
    root = math.sqrt(2.0 - b * b)
    theta = w * b * root * np.asarray(t, dtype=float)
    num = 2.0 * b * b * np.cosh(theta) + 2j * b * root * np.sinh(theta)
    den = 2.0 * np.cosh(theta) - math.sqrt(4.0 - 2.0 * b * b) * np.cos(math.sqrt(w) * b * np.asarray(x, dtype=float))
    if np.any(np.abs(den) < 1e-12):
        raise DomainError("breather singularity")
    return (num / den - 1.0) * math.sqrt(w)


def breather(params: BreatherParams, x, t):
    """Complex breather ``z(x, t)``; ``u = z.real``, ``v = z.imag``.

    Solves ``i z_t + z_xx + |z|^2 z = 0``. Accepts scalars or broadcastable arrays.
    """
    z = _envelope(params, x, t) * np.exp(1j * params.omega * np.asarray(t, dtype=float))
    return z[()] if np.ndim(z) == 0 else z


def breather_field(params: BreatherParams, x: np.ndarray, t: float) -> ComplexField:
    return ComplexField.from_complex(breather(params, x, t))


def sol_err(numeric: ComplexField, exact_u, exact_v) -> float:
    """Relative Euclidean error of ``(u, v)`` against the exact values."""
    eu = np.asarray(exact_u, dtype=float)
    ev = np.asarray(exact_v, dtype=float)
    if eu.shape != numeric.u.shape or ev.shape != numeric.v.shape:
        raise DomainError("numeric and exact samples differ in length")
    ref = np.sum(eu**2) + np.sum(ev**2)
    if ref == 0:
        raise DomainError("relative error undefined for a zero exact solution")
    diff = np.sum((numeric.u - eu) ** 2) + np.sum((numeric.v - ev) ** 2)
    return float(math.sqrt(diff / ref))


@dataclass(frozen=True)
class OrderEstimate:
    order: float
    at_floor: bool

    def __str__(self) -> str:
        return "***" if self.at_floor else f"{self.order:.2f}"


def order_estimate(
    errs: Sequence[float],
    floor: Optional[float] = None,
    floor_factor: float = 2.0,
    min_order: float = 1.5,
) -> list:
    """Observed orders ``log2(err[k-1]/err[k])`` for a step-halving sequence.

    An entry is flagged as floor-limited when its error lies within
    ``floor_factor`` of the spatial floor and the observed order has dropped
    below ``min_order``. The floor defaults to the smallest error in the
    sequence. Returns ``len(errs) - 1`` :class:`OrderEstimate` objects.
    """
    e = np.asarray(errs, dtype=float)
    if e.size < 2:
        raise DomainError("need at least two errors")
    if np.any(~np.isfinite(e)) or np.any(e <= 0):
        raise DomainError("errors must be positive and finite")
    ref = float(e.min()) if floor is None else floor
    out = []
    for k in range(1, e.size):
        p = math.log2(e[k - 1] / e[k])
        out.append(OrderEstimate(p, bool(e[k] <= floor_factor * ref and p < min_order)))
    return out
