"""Uniform periodic grids and the discrete difference/average operators.

Nodes follow ``x_m = a + (m-1) dx`` for ``m = 1..M``; node ``M`` is the
periodic image of node 1, so every stored field has ``M - 1`` entries and
neighbour access is a cyclic roll.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "GridSpec",
    "ComplexField",
    "delta_plus",
    "delta_minus",
    "delta_2",
    "mu_space",
    "mu_time",
    "shift_up",
    "shift_down",
]


def _checked(field) -> np.ndarray:
    arr = np.asarray(field, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise DomainError("periodic operators need a 1-d array with at least 2 entries")
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite entries in field")
    return arr


def shift_up(f: np.ndarray) -> np.ndarray:
    """Entry ``m`` of the result is ``f[m+1]`` (cyclic)."""
    return np.roll(f, -1)


def shift_down(f: np.ndarray) -> np.ndarray:
    """Entry ``m`` of the result is ``f[m-1]`` (cyclic)."""
    return np.roll(f, 1)


@dataclass(frozen=True)
class GridSpec:
    """Uniform space-time grid on ``[a, b] x [0, T]`` with periodic wrap in space.

    Parameters
    ----------
    a, b : float
        Spatial endpoints.
    M : int
        Number of nodes including the periodic image ``x_M = b``.
    T : float
        Final time.
    N : int
        Number of time steps (``N = 0`` is allowed and means no stepping).
    """

    a: float
    b: float
    M: int
    T: float
    N: int

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.b > self.a):
            raise DomainError("need finite endpoints with b > a")
        if self.M < 3:
            raise DomainError("need M >= 3 nodes")
        if self.N < 0 or self.T < 0 or (self.N == 0) != (self.T == 0):
            raise DomainError("need N >= 1 and T > 0 (or N = T = 0 for an empty run)")

    @classmethod
    def from_spacing(cls, a: float, b: float, dx: float, T: float, dt: float) -> "GridSpec":
        """Build a grid from target step sizes; both must divide their intervals."""
        if dx <= 0 or dt <= 0:
            raise DomainError("step sizes must be positive")
        m_cells = round((b - a) / dx)
        n_steps = round(T / dt)
        if abs(m_cells * dx - (b - a)) > 1e-9 * (b - a):
            raise DomainError(f"dx={dx!r} does not divide [{a!r}, {b!r}]")
        if T == 0:
            return cls(a=a, b=b, M=m_cells + 1, T=0.0, N=0)
        if abs(n_steps * dt - T) > 1e-9 * max(T, dt):
            raise DomainError(f"dt={dt!r} does not divide T={T!r}")
        return cls(a=a, b=b, M=m_cells + 1, T=T, N=n_steps)

    @property
    def dx(self) -> float:
        return (self.b - self.a) / (self.M - 1)

    @property
    def dt(self) -> float:
        return self.T / self.N if self.N else 0.0

    @property
    def n_unknowns(self) -> int:
        return self.M - 1

    @property
    def x(self) -> np.ndarray:
        """Independent nodes ``x_1 .. x_{M-1}``."""
        return self.a + np.arange(self.M - 1) * self.dx

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.dt


@dataclass(frozen=True)
class ComplexField:
    """One time level ``z = u + i v`` stored as two real arrays of length ``M - 1``."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if u.shape != v.shape or u.ndim != 1:
            raise DomainError("u and v must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise DomainError("non-finite entries in field")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_complex(cls, z) -> "ComplexField":
        z = np.asarray(z, dtype=complex)
        return cls(z.real.copy(), z.imag.copy())

    @classmethod
    def zeros(cls, n: int) -> "ComplexField":
        return cls(np.zeros(n), np.zeros(n))

    @property
    def z(self) -> np.ndarray:
        return self.u + 1j * self.v

    def __len__(self) -> int:
        return self.u.size


def delta_plus(field, dx: float) -> np.ndarray:
    """Forward difference ``(f[m+1] - f[m]) / dx`` with cyclic wrap."""
    f = _checked(field)
    return (shift_up(f) - f) / dx


def delta_minus(field, dx: float) -> np.ndarray:
    """Backward difference ``(f[m] - f[m-1]) / dx`` with cyclic wrap."""
    f = _checked(field)
    return (f - shift_down(f)) / dx


def delta_2(field, dx: float) -> np.ndarray:
    """Centred second difference ``(f[m+1] - 2 f[m] + f[m-1]) / dx**2``."""
    f = _checked(field)
    return (shift_up(f) - 2.0 * f + shift_down(f)) / dx**2


def mu_space(field) -> np.ndarray:
    """Forward spatial average ``(f[m+1] + f[m]) / 2``."""
    f = _checked(field)
    return 0.5 * (shift_up(f) + f)


def mu_time(level_n: ComplexField, level_np1: ComplexField) -> ComplexField:
    """Average of two consecutive time levels."""
    if len(level_n) != len(level_np1):
        raise DomainError("time levels live on different grids")
    return ComplexField(0.5 * (level_np1.u + level_n.u), 0.5 * (level_np1.v + level_n.v))
