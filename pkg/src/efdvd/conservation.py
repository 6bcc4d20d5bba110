"""Discrete conservation laws of charge and energy and the global invariants.

For a step pair the local residuals are ``d_t G + d+_m F`` (forward
differences in time and space). On arbitrary data they equal the scheme
residual contracted with a multiplier, so they vanish on exact scheme
solutions:

    charge:  d_t G1 + d+ F1 = 2 U row1 - 2 V row2     (DVD family, G1 = alpha |z|^2)
    energy:  d_t G2 + d+ F2 = -2 d_t v row1 - 2 d_t u row2   (all four schemes)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .grid import ComplexField, GridSpec
from .schemes import SchemeKind, StepPair

__all__ = [
    "LocalCLReport",
    "GlobalInvariantReport",
    "charge_flux_density",
    "energy_flux_density",
    "energy_density",
    "charge_multiplier",
    "energy_multiplier",
    "charge_cl_residual",
    "energy_cl_residual",
    "global_charge",
    "global_energy",
    "DiagnosticsAccumulator",
    "local_cl_residuals",
    "global_invariants",
]


@dataclass(frozen=True)
class LocalCLReport:
    err1: float
    err2: float


@dataclass(frozen=True)
class GlobalInvariantReport:
    errM: float
    errH: float


def _dp(f, dx):
    return (np.roll(f, -1) - f) / dx


def _dm(f, dx):
    return (f - np.roll(f, 1)) / dx


def _means(pair: StepPair):
    return 0.5 * (pair.zn.u + pair.znp1.u), 0.5 * (pair.zn.v + pair.znp1.v)


def charge_flux_density(pair: StepPair, alpha: float = 1.0):
    """Charge flux ``F1`` on the pair and density ``alpha |z|^2`` at both levels."""
    dx = pair.dx
    U, V = _means(pair)
    avg_u = 0.5 * (U + np.roll(U, 1))  # mu_m applied at m-1
    avg_v = 0.5 * (V + np.roll(V, 1))
    F1 = 2.0 * avg_u * _dm(V, dx) - 2.0 * _dm(U, dx) * avg_v
    G_n = alpha * (pair.zn.u**2 + pair.zn.v**2)
    G_np1 = alpha * (pair.znp1.u**2 + pair.znp1.v**2)
    return F1, G_n, G_np1


def energy_density(level: ComplexField, dx: float) -> np.ndarray:
    u, v = level.u, level.v
    grad = _dp(u, dx) ** 2 + _dm(u, dx) ** 2 + _dp(v, dx) ** 2 + _dm(v, dx) ** 2
    return 0.5 * grad - 0.5 * (u * u + v * v) ** 2


def energy_flux_density(pair: StepPair):
    """Energy flux ``F2`` on the pair and density ``G2`` at both levels."""
    dx, dt = pair.dx, pair.dt
    U, V = _means(pair)
    wu = (pair.znp1.u - pair.zn.u) / dt
    wv = (pair.znp1.v - pair.zn.v) / dt
    F2 = -_dm(U, dx) * (wu + np.roll(wu, 1)) - _dm(V, dx) * (wv + np.roll(wv, 1))
    return F2, energy_density(pair.zn, dx), energy_density(pair.znp1, dx)


def charge_multiplier(pair: StepPair):
    U, V = _means(pair)
    return 2.0 * U, -2.0 * V


def energy_multiplier(pair: StepPair):
    return (
        -2.0 * (pair.znp1.v - pair.zn.v) / pair.dt,
        -2.0 * (pair.znp1.u - pair.zn.u) / pair.dt,
    )


def charge_cl_residual(pair: StepPair, alpha: float = 1.0) -> np.ndarray:
    F1, G0, G1 = charge_flux_density(pair, alpha)
    return (G1 - G0) / pair.dt + _dp(F1, pair.dx)


def energy_cl_residual(pair: StepPair) -> np.ndarray:
    F2, G0, G1 = energy_flux_density(pair)
    return (G1 - G0) / pair.dt + _dp(F2, pair.dx)


def global_charge(level: ComplexField, dx: float) -> float:
    return float(dx * np.sum(level.u**2 + level.v**2))


def global_energy(level: ComplexField, dx: float) -> float:
    return float(dx * np.sum(energy_density(level, dx)))


def _charge_weight(kind: SchemeKind, dt: float) -> float:
    # only the fitted DVD scheme carries the alpha-weighted charge density
    return kind.alpha(dt) if kind.fitted and not kind.avf else 1.0


class DiagnosticsAccumulator:
    """Running maxima of the local and global conservation errors.

    Feed consecutive levels with :meth:`push`; only the first level and the
    previous one are kept.
    """

    def __init__(self, grid: GridSpec, kind: SchemeKind):
        self.dx = grid.dx
        self.dt = grid.dt
        self.charge_alpha = _charge_weight(kind, grid.dt) if grid.N else 1.0
        self.err1 = 0.0
        self.err2 = 0.0
        self.errM = 0.0
        self.errH = 0.0
        self._prev = None
        self._M0 = self._H0 = None

    def push(self, level: ComplexField) -> None:
        M = global_charge(level, self.dx)
        H = global_energy(level, self.dx)
        if self._prev is None:
            self._M0, self._H0 = M, H
        else:
            pair = StepPair(self._prev, level, self.dt, self.dx)
            self.err1 = max(self.err1, float(np.max(np.abs(charge_cl_residual(pair, self.charge_alpha)))))
            self.err2 = max(self.err2, float(np.max(np.abs(energy_cl_residual(pair)))))
            self.errM = max(self.errM, abs(M - self._M0))
            self.errH = max(self.errH, abs(H - self._H0))
        self._prev = level

    @property
    def local(self) -> LocalCLReport:
        return LocalCLReport(self.err1, self.err2)

    @property
    def invariants(self) -> GlobalInvariantReport:
        return GlobalInvariantReport(self.errM, self.errH)


def _levels(trajectory: Iterable[ComplexField]) -> Sequence[ComplexField]:
    levels = list(trajectory)
    if not levels:
        raise DomainError("empty trajectory")
    return levels


def local_cl_residuals(trajectory, grid: GridSpec, scheme: SchemeKind) -> LocalCLReport:
    """Largest absolute local charge and energy residuals over all pairs."""
    acc = DiagnosticsAccumulator(grid, scheme)
    for level in _levels(trajectory):
        acc.push(level)
    return acc.local


def global_invariants(trajectory, grid: GridSpec) -> GlobalInvariantReport:
    """Largest drift of global charge and energy from the first level."""
    levels = _levels(trajectory)
    M = [global_charge(z, grid.dx) for z in levels]
    H = [global_energy(z, grid.dx) for z in levels]
    return GlobalInvariantReport(
        float(np.max(np.abs(np.subtract(M, M[0])))),
        float(np.max(np.abs(np.subtract(H, H[0])))),
    )
