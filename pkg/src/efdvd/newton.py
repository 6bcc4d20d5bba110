"""Newton iteration for one implicit time step.

Unknowns are interleaved as ``x = (u_0, v_0, u_1, v_1, ...)``, which makes the
Jacobian cyclic block-tridiagonal with 2x2 blocks. The banded part (three sub-
and super-diagonals) is factorized by LAPACK and the two wrap-around corner
blocks are folded back in with a rank-4 Woodbury correction, so each linear
solve is O(M).
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, lu_factor, lu_solve, solve_banded

from .errors import ConvergenceError, DomainError, SingularJacobianError, SolverError
from .grid import ComplexField, GridSpec
from .schemes import SchemeKind, StepPair, avf_nonlinear, dvd_nonlinear, residual

__all__ = [
    "JacobianMode",
    "SolverConfig",
    "NewtonStats",
    "jacobian_blocks",
    "jacobian_dense",
    "cyclic_block_solve",
    "fd_jacobian",
    "jacobian_fd_check",
    "residual_norm",
    "step",
]

log = logging.getLogger(__name__)


class JacobianMode(enum.Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE_CHECK = "finite_difference_check"


@dataclass(frozen=True)
class SolverConfig:
    """Newton settings.

    ``tol_residual`` bounds the residual max-norm relative to the max-norm of
    the entrywise sum of absolute residual contributions, so it is insensitive
    to the ``1/dx**2`` scale of the stencil. Iteration also continues until the
    last correction is below ``tol_increment * (1 + max|x|)``; with quadratic
    convergence that leaves the iterate at roundoff distance from the root.
    """

    tol_residual: float = 1e-12
    max_iters: int = 20
    tol_increment: float = 1e-8
    jacobian_mode: JacobianMode = JacobianMode.ANALYTIC
    check_solve: bool = False
    fd_tolerance: float = 1e-6

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise DomainError("tol_residual must be positive")
        if not self.tol_increment > 0:
            raise DomainError("tol_increment must be positive")
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")


@dataclass
class NewtonStats:
    iterations: int = 0
    final_residual_norm: float = float("inf")
    converged: bool = False
    increments: list = field(default_factory=list)
    fd_discrepancy: Optional[float] = None


def _rows(kind: SchemeKind, pair: StepPair):
    return np.stack(residual(kind, pair), axis=1).ravel()


def residual_norm(kind: SchemeKind, pair: StepPair) -> Tuple[np.ndarray, float]:
    """Interleaved residual vector and its relative max-norm."""
    r = _rows(kind, pair)
    a = kind.alpha(pair.dt)
    u0, v0, u1, v1 = pair.zn.u, pair.zn.v, pair.znp1.u, pair.znp1.v
    U, V = np.abs(0.5 * (u0 + u1)), np.abs(0.5 * (v0 + v1))
    lap = lambda f: (np.roll(f, -1) + 2.0 * f + np.roll(f, 1)) / pair.dx**2
    n1, n2 = (avf_nonlinear if kind.avf else dvd_nonlinear)(pair)
    s1 = a * (np.abs(u1) + np.abs(u0)) / pair.dt + lap(V) + np.abs(n1)
    s2 = a * (np.abs(v1) + np.abs(v0)) / pair.dt + lap(U) + np.abs(n2)
    scale = max(float(s1.max()), float(s2.max()))
    rmax = float(np.max(np.abs(r)))
    return r, (rmax / scale if scale > 0 else rmax)


def jacobian_blocks(kind: SchemeKind, pair: StepPair):
    """Diagonal 2x2 blocks (shape ``(n, 2, 2)``) and the constant off-diagonal coupling."""
    a = kind.alpha(pair.dt)
    dt, dx = pair.dt, pair.dx
    u0, v0, u1, v1 = pair.zn.u, pair.zn.v, pair.znp1.u, pair.znp1.v
    U, V = 0.5 * (u0 + u1), 0.5 * (v0 + v1)
    if kind.avf:
        mu2, mv2 = 0.5 * (u0**2 + u1**2), 0.5 * (v0**2 + v1**2)
        j11 = (2.0 / 3.0) * U * V + u1 * v1 / 3.0
        j12 = v1 * V + 0.5 * mv2 + U**2 / 3.0 + u1**2 / 6.0
        j21 = u1 * U + 0.5 * mu2 + V**2 / 3.0 + v1**2 / 6.0
        j22 = (2.0 / 3.0) * U * V + u1 * v1 / 3.0
    else:
        s = 0.5 * ((u0**2 + v0**2) + (u1**2 + v1**2))
        j11 = u1 * V
        j12 = v1 * V + 0.5 * s
        j21 = u1 * U + 0.5 * s
        j22 = v1 * U
    diag = np.empty((u0.size, 2, 2))
    diag[:, 0, 0] = a / dt + j11
    diag[:, 0, 1] = -1.0 / dx**2 + j12
    diag[:, 1, 0] = -1.0 / dx**2 + j21
    diag[:, 1, 1] = -a / dt + j22
    return diag, 0.5 / dx**2


def jacobian_dense(kind: SchemeKind, pair: StepPair) -> np.ndarray:
    diag, c = jacobian_blocks(kind, pair)
    n = diag.shape[0]
    J = np.zeros((2 * n, 2 * n))
    for m in range(n):
        J[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] += diag[m]
        for nb in ((m + 1) % n, (m - 1) % n):
            J[2 * m, 2 * nb + 1] += c
            J[2 * m + 1, 2 * nb] += c
    return J


def _banded(diag: np.ndarray, c: float) -> np.ndarray:
    n = diag.shape[0]
    size = 2 * n
    ab = np.zeros((7, size))  # ab[3 + i - j, j] = A[i, j]
    ev, od = np.arange(0, size, 2), np.arange(1, size, 2)
    ab[3, ev] = diag[:, 0, 0]
    ab[3, od] = diag[:, 1, 1]
    ab[2, od] = diag[:, 0, 1]  # (2m, 2m+1)
    ab[4, ev] = diag[:, 1, 0]  # (2m+1, 2m)
    # (2m, 2m+3) and (2m+1, 2m+2) for m < n-1
    ab[0, od[1:]] = c
    ab[2, ev[1:]] = c
    # (2m, 2m-1) and (2m+1, 2m-2) for m > 0
    ab[4, od[:-1]] = c
    ab[6, ev[:-1]] = c
    return ab


def cyclic_block_solve(diag: np.ndarray, c: float, rhs: np.ndarray) -> np.ndarray:
    """Solve the cyclic block-tridiagonal system with blocks ``diag`` and coupling ``c``.

    Raises :class:`numpy.linalg.LinAlgError` if the matrix is singular.
    """
    n = diag.shape[0]
    size = 2 * n
    if n < 4:
        J = np.zeros((size, size))
        for m in range(n):
            J[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] += diag[m]
            for nb in ((m + 1) % n, (m - 1) % n):
                J[2 * m, 2 * nb + 1] += c
                J[2 * m + 1, 2 * nb] += c
        return np.linalg.solve(J, rhs)
    corner = np.array([0, 1, size - 2, size - 1])
    Ucols = np.zeros((size, 4))
    Ucols[corner, np.arange(4)] = 1.0
    sol = solve_banded((3, 3), _banded(diag, c), np.column_stack([rhs, Ucols]), check_finite=False)
    y, Z = sol[:, 0], sol[:, 1:]
    # corner entries: A[0,2n-1], A[1,2n-2], A[2n-2,1], A[2n-1,0]
    pick = np.array([size - 1, size - 2, 1, 0])
    cap = np.eye(4) + c * Z[pick, :]
    corr = np.linalg.solve(cap, c * y[pick])
    return y - Z @ corr


def _interleave(f: ComplexField) -> np.ndarray:
    return np.stack([f.u, f.v], axis=1).ravel()


def _split(x: np.ndarray) -> ComplexField:
    return ComplexField(x[0::2].copy(), x[1::2].copy())


def _coloring(n: int) -> int:
    for k in range(3, n + 1):
        if n % k == 0:
            return k
    return n


def fd_jacobian(kind: SchemeKind, pair: StepPair, rel_step: float = 1e-7) -> np.ndarray:
    """Central-difference Jacobian of the residual with respect to the new level.

    Columns belonging to nodes at least three apart never share a residual row,
    so they are perturbed together.
    """
    x0 = _interleave(pair.znp1)
    n = len(pair.zn)
    size = 2 * n
    k = _coloring(n)
    J = np.zeros((size, size))
    node = np.arange(size) // 2
    for color in range(k):
        for comp in (0, 1):
            cols = np.flatnonzero((node % k == color) & (np.arange(size) % 2 == comp))
            h = np.zeros(size)
            h[cols] = rel_step * (1.0 + np.abs(x0[cols]))
            rp = _rows(kind, StepPair(pair.zn, _split(x0 + h), pair.dt, pair.dx))
            rm = _rows(kind, StepPair(pair.zn, _split(x0 - h), pair.dt, pair.dx))
            diff = rp - rm
            for j in cols:
                m = j // 2
                rows = [2 * ((m + s) % n) + t for s in (-1, 0, 1) for t in (0, 1)]
                rows = sorted(set(rows))
                J[rows, j] = diff[rows] / (2.0 * h[j])
    return J


def jacobian_fd_check(kind: SchemeKind, pair: StepPair) -> float:
    """Max-norm discrepancy of analytic vs finite-difference Jacobian, relative to the former."""
    Ja = jacobian_dense(kind, pair)
    Jf = fd_jacobian(kind, pair)
    return float(np.max(np.abs(Ja - Jf)) / np.max(np.abs(Ja)))


def step(kind: SchemeKind, zn: ComplexField, grid: GridSpec, cfg: SolverConfig = SolverConfig()):
    """Advance ``zn`` by one step of ``kind``.

    Starts from ``z_{n+1} = z_n`` and applies plain Newton corrections (at
    least one) until the relative residual is below ``cfg.tol_residual`` and
    the last correction is negligible.

    Returns
    -------
    (ComplexField, NewtonStats)

    Raises
    ------
    ConvergenceError
        Tolerance not met after ``cfg.max_iters`` corrections.
    SingularJacobianError
        The Newton matrix could not be factorized.
    """
    dt, dx = grid.dt, grid.dx
    if len(zn) != grid.n_unknowns:
        raise DomainError("level does not match the grid")
    stats = NewtonStats()
    x = _interleave(zn)
    cur = zn
    for it in range(cfg.max_iters):
        pair = StepPair(zn, cur, dt, dx)
        r = _rows(kind, pair)
        diag, c = jacobian_blocks(kind, pair)
        if it == 0 and cfg.jacobian_mode is JacobianMode.FINITE_DIFFERENCE_CHECK:
            stats.fd_discrepancy = jacobian_fd_check(kind, pair)
            if stats.fd_discrepancy > cfg.fd_tolerance:
                raise SolverError(f"analytic Jacobian disagrees with finite differences ({stats.fd_discrepancy:.3g})", stats)
        try:
            dxn = cyclic_block_solve(diag, c, -r)
        except (LinAlgError, np.linalg.LinAlgError) as exc:
            raise SingularJacobianError(f"singular Newton matrix: {exc}", stats) from exc
        if not np.all(np.isfinite(dxn)):
            raise SingularJacobianError("non-finite Newton correction", stats)
        if cfg.check_solve:
            J = jacobian_dense(kind, pair)
            bad = np.max(np.abs(J @ dxn + r))
            if bad > 1e-12 * max(np.max(np.abs(r)), np.finfo(float).tiny):
                raise SolverError(f"linear solve defect {bad:.3g}", stats)
        x = x + dxn
        cur = _split(x)
        stats.iterations = it + 1
        stats.increments.append(float(np.max(np.abs(dxn))))
        _, stats.final_residual_norm = residual_norm(kind, StepPair(zn, cur, dt, dx))
        small_step = stats.increments[-1] <= cfg.tol_increment * (1.0 + float(np.max(np.abs(x))))
        if stats.final_residual_norm <= cfg.tol_residual and small_step:
            break
    stats.converged = stats.final_residual_norm <= cfg.tol_residual
    inc = stats.increments
    if len(inc) >= 3 and inc[-2] > 0 and inc[-1] > inc[-2] ** 1.5:
        log.debug("slow Newton contraction: increments %s", inc)
    if not stats.converged:
        raise ConvergenceError(
            f"Newton did not converge in {cfg.max_iters} iterations "
            f"(relative residual {stats.final_residual_norm:.3g})",
            stats,
        )
    return cur, stats
