import math

import numpy as np
import pytest
from scipy.optimize import root

from conftest import bench_grid, make_pair
from efdvd.breather import BreatherParams, breather_field
from efdvd.errors import ConvergenceError, SingularJacobianError
from efdvd.grid import ComplexField, GridSpec
from efdvd.newton import (
    JacobianMode,
    SolverConfig,
    cyclic_block_solve,
    jacobian_blocks,
    jacobian_dense,
    jacobian_fd_check,
    residual_norm,
    step,
)
from efdvd.schemes import SchemeKind, StepPair, Variant

ALL = [SchemeKind(v, 3.0) for v in Variant]


def small_grid(n=8, dt=0.05):
    return GridSpec(0.0, 2 * math.pi, n + 1, dt, 1)


@pytest.mark.parametrize("kind", ALL, ids=lambda k: k.name)
def test_zero_is_fixed_point(kind):
    z, stats = step(kind, ComplexField.zeros(8), small_grid())
    assert stats.iterations == 1 and stats.converged
    assert not z.u.any() and not z.v.any()


def test_plane_wave_matches_scalar_root():
    c = 0.8 + 0.5j
    g = small_grid(n=6, dt=0.1)
    z0 = ComplexField(np.full(6, c.real), np.full(6, c.imag))
    z1, _ = step(SchemeKind(Variant.DVD), z0, g)

    def scalar(x):
        u1, v1 = x
        s = 0.5 * (abs(c) ** 2 + u1 * u1 + v1 * v1)
        U, V = 0.5 * (c.real + u1), 0.5 * (c.imag + v1)
        return [(u1 - c.real) / g.dt + s * V, -(v1 - c.imag) / g.dt + s * U]

    ref = root(scalar, [c.real, c.imag], tol=1e-15).x
    np.testing.assert_allclose(z1.u, ref[0], atol=1e-13)
    np.testing.assert_allclose(z1.v, ref[1], atol=1e-13)
    # space-independent data stays space-independent; the modulus is preserved
    assert np.ptp(z1.u) == 0 and np.ptp(z1.v) == 0
    assert abs(z1.z[0]) == pytest.approx(abs(c), rel=1e-14)


def test_breather_fine_step():
    g = bench_grid(dt=0.01 / 32)
    z0 = breather_field(BreatherParams(), g.x, 0.0)
    z1, stats = step(SchemeKind(Variant.EF_DVD, 25.0), z0, g)
    assert stats.converged and stats.final_residual_norm <= 1e-12
    assert stats.iterations <= 6
    _, rel = residual_norm(SchemeKind(Variant.EF_DVD, 25.0), StepPair(z0, z1, g.dt, g.dx))
    assert rel <= 1e-12


@pytest.mark.parametrize("kind", ALL, ids=lambda k: k.name)
def test_jacobian_against_finite_differences(rng, kind):
    for _ in range(3):
        assert jacobian_fd_check(kind, make_pair(rng, n=7)) <= 1e-6


def test_jacobian_zero_fields_is_linear_part():
    z = ComplexField.zeros(7)
    assert jacobian_fd_check(SchemeKind(Variant.DVD), StepPair(z, z, 0.1, 0.5)) <= 1e-9


@pytest.mark.parametrize("fitted,classic", [(Variant.EF_DVD, Variant.DVD), (Variant.EF_AVF, Variant.AVF)])
def test_fitted_jacobian_tends_to_classic(rng, fitted, classic):
    pair = make_pair(rng, n=7)
    Ja = jacobian_dense(SchemeKind(fitted, 1e-6 / pair.dt), pair)
    Jb = jacobian_dense(SchemeKind(classic), pair)
    assert np.max(np.abs(Ja - Jb)) <= 1e-9


@pytest.mark.parametrize("n", [2, 3, 4, 5, 16, 33])
def test_cyclic_solver_exact(rng, n):
    pair = make_pair(rng, n=n)
    kind = SchemeKind(Variant.AVF)
    diag, c = jacobian_blocks(kind, pair)
    b = rng.standard_normal(2 * n)
    x = cyclic_block_solve(diag, c, b)
    J = jacobian_dense(kind, pair)
    assert np.max(np.abs(J @ x - b)) <= 1e-12 * np.max(np.abs(b)) * max(1.0, np.abs(J).max())


def test_checked_modes_run(rng):
    g = small_grid()
    z0 = ComplexField(0.3 * rng.standard_normal(8), 0.3 * rng.standard_normal(8))
    cfg = SolverConfig(jacobian_mode=JacobianMode.FINITE_DIFFERENCE_CHECK, check_solve=True)
    z1, stats = step(SchemeKind(Variant.EF_AVF, 2.0), z0, g, cfg)
    assert stats.fd_discrepancy <= 1e-6 and stats.converged


def test_deterministic(rng):
    g = bench_grid(dt=0.01)
    z0 = breather_field(BreatherParams(), g.x, 0.0)
    a, _ = step(SchemeKind(Variant.AVF), z0, g)
    b, _ = step(SchemeKind(Variant.AVF), z0, g)
    assert np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)


def test_nonconvergence_is_reported():
    g = bench_grid(dt=0.01)
    z0 = breather_field(BreatherParams(), g.x, 0.0)
    with pytest.raises(ConvergenceError) as info:
        step(SchemeKind(Variant.DVD), z0, g, SolverConfig(max_iters=1))
    assert info.value.stats.iterations == 1 and not info.value.stats.converged


def test_singular_jacobian_is_distinct():
    # alpha/dt cancels the diagonal: rows with zero coupling make the matrix singular
    diag = np.zeros((5, 2, 2))
    with pytest.raises(np.linalg.LinAlgError):
        cyclic_block_solve(diag, 0.0, np.ones(10))
    assert not issubclass(SingularJacobianError, ConvergenceError)
