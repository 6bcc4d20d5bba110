"""Randomized algebraic property suite behind the ``check`` command.

Every check evaluates an identity that must hold for arbitrary periodic data
(no time stepping involved), except the classic-limit check which runs ten
benchmark steps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from .breather import BreatherParams, breather_field
from .conservation import (
    charge_cl_residual,
    charge_multiplier,
    energy_cl_residual,
    energy_multiplier,
)
from .dvd import rho
from .fitting import FitParams, _alpha_theta, alpha, check_fitting_exactness
from .grid import ComplexField, GridSpec
from .newton import SolverConfig, jacobian_fd_check, step
from .schemes import (
    SchemeKind,
    StepPair,
    Variant,
    avf_gradient_check,
    dvd_cross_check,
    residual_avf,
    residual_dvd,
)

__all__ = ["CheckResult", "random_pair", "run_checks", "CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<28} {self.value:.3e} <= {self.tolerance:.1e}"


def random_pair(rng: np.random.Generator, M: int = 16, dt: float = 0.1) -> StepPair:
    """Two random levels on ``M`` nodes of a ``2 pi`` periodic grid."""
    n = M - 1
    dx = 2.0 * math.pi / n
    zn = ComplexField(rng.standard_normal(n), rng.standard_normal(n))
    znp1 = ComplexField(rng.standard_normal(n), rng.standard_normal(n))
    return StepPair(zn, znp1, dt, dx)


def _contract(mult, rows):
    return mult[0] * rows[0] + mult[1] * rows[1]


def check_charge_identity(rng, samples=100):
    worst = 0.0
    for _ in range(samples):
        pair = random_pair(rng)
        for a in (1.0, 0.7):
            lhs = charge_cl_residual(pair, a)
            rhs = _contract(charge_multiplier(pair), residual_dvd(pair, a))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return CheckResult("charge characteristic form", worst, 1e-12)


def check_energy_identity(rng, samples=100):
    worst = 0.0
    for _ in range(samples):
        pair = random_pair(rng)
        lhs = energy_cl_residual(pair)
        mult = energy_multiplier(pair)
        for a in (1.0, 0.7):
            for res in (residual_dvd, residual_avf):
                worst = max(worst, float(np.max(np.abs(lhs - _contract(mult, res(pair, a))))))
    return CheckResult("energy characteristic form", worst, 1e-11)


def check_dvd_oracle(rng, samples=100):
    worst = max(dvd_cross_check(random_pair(rng)) for _ in range(samples))
    return CheckResult("generic DVD cross-check", worst, 1e-11)


def check_avf_oracle(rng, samples=100):
    worst = max(avf_gradient_check(random_pair(rng)) for _ in range(samples))
    return CheckResult("AVF Gauss quadrature", worst, 1e-12)


def check_rho(rng, samples=1000):
    worst = 0.0
    for k in range(2, 7):
        s1 = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
        s2 = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
        r = rho(k, s1, s2)
        lhs = 2.0 * np.real(r * (s1 - s2))
        rhs = np.abs(s1) ** k - np.abs(s2) ** k
        scale = np.abs(s1) ** k + np.abs(s2) ** k
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / scale)))
    return CheckResult("rho discrete gradient", worst, 1e-12)


def check_fitting(rng=None):
    worst = 0.0
    dt = 0.01
    for theta in (0.01, 0.1, 0.25, 1.0, 3.0):
        params = FitParams(theta / dt, dt)
        for t in np.linspace(0.0, 1.0, 11):
            worst = max(worst, check_fitting_exactness(params, float(t)))
    return CheckResult("fitting exactness", worst, 1e-13)


def check_alpha_limit(rng=None):
    return CheckResult("alpha classic limit", abs(_alpha_theta(1e-8) - 1.0), 1e-15)


def check_jacobian(rng, samples=5):
    worst = 0.0
    for _ in range(samples):
        pair = random_pair(rng, M=8)
        for v in Variant:
            worst = max(worst, jacobian_fd_check(SchemeKind(v, 3.0), pair))
    return CheckResult("analytic vs FD Jacobian", worst, 1e-6)


def classic_limit_gap(steps: int = 10, dt: float = 0.01 / 32) -> float:
    """Max distance between EF and classic trajectories at ``omega dt = 1e-6``."""
    grid = GridSpec.from_spacing(-math.pi / 7, math.pi / 7, 2 * math.pi / 7000, steps * dt, dt)
    z0 = breather_field(BreatherParams(), grid.x, 0.0)
    omega = 1e-6 / dt
    worst = 0.0
    for fitted, classic in ((Variant.EF_DVD, Variant.DVD), (Variant.EF_AVF, Variant.AVF)):
        a = b = z0
        for _ in range(steps):
            a, _s = step(SchemeKind(fitted, omega), a, grid, SolverConfig())
            b, _s = step(SchemeKind(classic), b, grid, SolverConfig())
            worst = max(worst, float(np.max(np.abs(a.z - b.z))))
    return worst


def check_classic_limit(rng=None):
    return CheckResult("EF -> classic limit", classic_limit_gap(), 1e-8)


CHECKS: List[Callable] = [
    check_charge_identity,
    check_energy_identity,
    check_dvd_oracle,
    check_avf_oracle,
    check_rho,
    check_fitting,
    check_alpha_limit,
    check_jacobian,
    check_classic_limit,
]


def run_checks(seed: int = 0) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    return [chk(rng) for chk in CHECKS]
