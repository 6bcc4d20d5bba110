"""Generic discrete variational derivative for product-form energy densities.

A density is a sum of terms

    c * |f(Z_m)|**p * |g+(d+ Z_m)|**q+ * |g-(d- Z_m)|**q-

and the discrete variational derivative of the summed energy between two
levels ``a`` and ``b`` satisfies the exact chain rule

    E(a) - E(b) = dx * sum_m 2 Re[ dvd(a, b)_m * conj(a_m - b_m) ]

on periodic fields. Any of the three factors may be absent (``None``), which
stands for the constant factor 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError
from .grid import ComplexField

__all__ = [
    "Analytic",
    "IDENTITY",
    "DensityTerm",
    "HamiltonianSpec",
    "nls_hamiltonian",
    "rho",
    "partial_H",
    "partial_H_dplus",
    "partial_H_dminus",
    "discrete_variational_derivative",
    "local_density",
    "semidiscrete_energy",
]


@dataclass(frozen=True)
class Analytic:
    """A complex-analytic scalar function together with its derivative."""

    fn: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]

    def __call__(self, z):
        return self.fn(z)


IDENTITY = Analytic(lambda z: z, lambda z: np.ones_like(z))


@dataclass(frozen=True)
class DensityTerm:
    coeff: float
    f: Optional[Analytic] = None
    p: int = 2
    gplus: Optional[Analytic] = None
    qplus: int = 2
    gminus: Optional[Analytic] = None
    qminus: int = 2

    def __post_init__(self):
        for name in ("p", "qplus", "qminus"):
            k = getattr(self, name)
            if int(k) != k or k < 2:
                raise DomainError(f"exponent {name}={k!r} must be an integer >= 2")
        if self.f is None and self.gplus is None and self.gminus is None:
            raise DomainError("a density term needs at least one non-constant factor")


@dataclass(frozen=True)
class HamiltonianSpec:
    terms: Sequence[DensityTerm]

    def __post_init__(self):
        if len(self.terms) == 0:
            raise DomainError("empty Hamiltonian")
        object.__setattr__(self, "terms", tuple(self.terms))


def nls_hamiltonian() -> HamiltonianSpec:
    """``(|d+Z|^2 + |d-Z|^2)/2 - |Z|^4/2``, the cubic NLS energy density."""
    return HamiltonianSpec(
        [
            DensityTerm(0.5, gplus=IDENTITY, qplus=2),
            DensityTerm(0.5, gminus=IDENTITY, qminus=2),
            DensityTerm(-0.5, f=IDENTITY, p=4),
        ]
    )


def _as_complex(field) -> np.ndarray:
    if isinstance(field, ComplexField):
        return field.z
    z = np.asarray(field, dtype=complex)
    if z.ndim != 1 or not np.all(np.isfinite(z)):
        raise DomainError("expected a finite 1-d complex field")
    return z


def _pair(a, b):
    za, zb = _as_complex(a), _as_complex(b)
    if za.shape != zb.shape:
        raise DomainError("fields have different lengths")
    return za, zb


def _dp(z, dx):
    return (np.roll(z, -1) - z) / dx


def _dm(z, dx):
    return (z - np.roll(z, 1)) / dx


def _rho_sum(k: int, r1, r2):
    """Bracketed sum of the discrete gradient of ``|s|**k`` (before the conj-average)."""
    if k % 2 == 0:
        # (r1^k - r2^k) / (r1^2 - r2^2) written without the division
        return sum(r1 ** (k - 2 - 2 * j) * r2 ** (2 * j) for j in range(k // 2))
    # odd: (r1^k - r2^k) / (r1^2 - r2^2) = [sum_j r1^(k-1-j) r2^j] / (r1 + r2).
    # Consecutive exponents of |s2| step by one, not two; that is the sequence
    # that telescopes against (r1 - r2).
    num = sum(r1 ** (k - 1 - j) * r2**j for j in range(k))
    den = r1 + r2
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den == 0, 0.0, num / np.where(den == 0, 1.0, den))
    return out


def rho(k: int, s1, s2):
    """Discrete gradient factor of ``|s|**k`` between ``s1`` and ``s2``.

    ``rho * (s1 - s2) + conj(rho) * conj(s1 - s2) == |s1|**k - |s2|**k``.
    Scalars in give a scalar out.
    """
    if int(k) != k or k < 2:
        raise DomainError(f"rho needs an integer k >= 2, got {k!r}")
    k = int(k)
    s1 = np.asarray(s1, dtype=complex)
    s2 = np.asarray(s2, dtype=complex)
    if not (np.all(np.isfinite(s1)) and np.all(np.isfinite(s2))):
        raise DomainError("non-finite rho argument")
    out = 0.5 * (np.conj(s1) + np.conj(s2)) * _rho_sum(k, np.abs(s1), np.abs(s2))
    return out[()] if out.ndim == 0 else out


def _divided(g: Analytic, x, y):
    same = x == y
    with np.errstate(invalid="ignore", divide="ignore"):
        dd = (g(x) - g(y)) / np.where(same, 1.0, x - y)
    return np.where(same, g.deriv(x), dd)


def _power(g: Optional[Analytic], k: int, arg):
    if g is None:
        return np.ones(arg.shape)
    return np.abs(g(arg)) ** k


def _factor_grad(g: Analytic, k: int, x, y):
    return _divided(g, x, y) * rho(k, g(x), g(y))


def _pick(arr, m):
    return arr if m is None else arr[m]


def _op1(spec, za, zb, dx):
    out = np.zeros(za.shape, dtype=complex)
    dpa, dpb, dma, dmb = _dp(za, dx), _dp(zb, dx), _dm(za, dx), _dm(zb, dx)
    for term in spec.terms:
        if term.f is None:
            continue
        qa = _power(term.gplus, term.qplus, dpa) * _power(term.gminus, term.qminus, dma)
        qb = _power(term.gplus, term.qplus, dpb) * _power(term.gminus, term.qminus, dmb)
        out += term.coeff * 0.5 * (qa + qb) * _factor_grad(term.f, term.p, za, zb)
    return out


def _op_diff(spec, za, zb, dx, side):
    out = np.zeros(za.shape, dtype=complex)
    dpa, dpb, dma, dmb = _dp(za, dx), _dp(zb, dx), _dm(za, dx), _dm(zb, dx)
    for term in spec.terms:
        if side == "+":
            g, q, xa, xb = term.gplus, term.qplus, dpa, dpb
            other = (term.gminus, term.qminus, dma, dmb)
        else:
            # divided difference taken in d- arguments on both numerator and denominator
            g, q, xa, xb = term.gminus, term.qminus, dma, dmb
            other = (term.gplus, term.qplus, dpa, dpb)
        if g is None:
            continue
        pavg = 0.5 * (_power(term.f, term.p, za) + _power(term.f, term.p, zb))
        go, qo, oa, ob = other
        oavg = 0.5 * (_power(go, qo, oa) + _power(go, qo, ob))
        out += term.coeff * pavg * oavg * _factor_grad(g, q, xa, xb)
    return out


def partial_H(spec: HamiltonianSpec, a, b, dx: float, m: Optional[int] = None):
    """Two-level derivative of the density with respect to ``Z_m``."""
    za, zb = _pair(a, b)
    return _pick(_op1(spec, za, zb, dx), m)


def partial_H_dplus(spec: HamiltonianSpec, a, b, dx: float, m: Optional[int] = None):
    """Two-level derivative of the density with respect to ``d+ Z_m``."""
    za, zb = _pair(a, b)
    return _pick(_op_diff(spec, za, zb, dx, "+"), m)


def partial_H_dminus(spec: HamiltonianSpec, a, b, dx: float, m: Optional[int] = None):
    """Two-level derivative of the density with respect to ``d- Z_m``."""
    za, zb = _pair(a, b)
    return _pick(_op_diff(spec, za, zb, dx, "-"), m)


def discrete_variational_derivative(spec: HamiltonianSpec, a, b, dx: float) -> np.ndarray:
    """Derivative with respect to the conjugate variables, entrywise over the grid.

    Returns ``conj(dH/dZ) - d-(conj(dH/d d+Z)) - d+(conj(dH/d d-Z))``; at
    ``a == b`` this is the semidiscrete gradient ``dE/dZ*`` divided by ``dx``.
    """
    za, zb = _pair(a, b)
    p1 = np.conj(_op1(spec, za, zb, dx))
    p2 = np.conj(_op_diff(spec, za, zb, dx, "+"))
    p3 = np.conj(_op_diff(spec, za, zb, dx, "-"))
    return p1 - _dm(p2, dx) - _dp(p3, dx)


def local_density(spec: HamiltonianSpec, Z, dx: float) -> np.ndarray:
    z = _as_complex(Z)
    dp, dm = _dp(z, dx), _dm(z, dx)
    out = np.zeros(z.shape)
    for term in spec.terms:
        out += (
            term.coeff
            * _power(term.f, term.p, z)
            * _power(term.gplus, term.qplus, dp)
            * _power(term.gminus, term.qminus, dm)
        )
    return out


def semidiscrete_energy(spec: HamiltonianSpec, Z, dx: float) -> float:
    """``dx * sum_m H(Z)_m``."""
    return float(dx * np.sum(local_density(spec, Z, dx)))
