import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from efdvd.errors import DomainError
from efdvd.grid import (
    ComplexField,
    GridSpec,
    delta_2,
    delta_minus,
    delta_plus,
    mu_space,
    mu_time,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)
periodic = arrays(np.float64, st.integers(3, 40), elements=finite)


def test_constant_arrays_have_zero_differences():
    c = np.full(7, 3.25)
    for op in (delta_plus, delta_minus, delta_2):
        np.testing.assert_array_equal(op(c, 0.1), 0.0)
    np.testing.assert_array_equal(mu_space(c), c)


def test_stencils_on_small_arrays():
    f = np.array([0.0, 1.0, 0.0, 1.0])
    np.testing.assert_array_equal(delta_plus(f, 1.0), [1, -1, 1, -1])
    np.testing.assert_array_equal(delta_minus(f, 1.0), [-1, 1, -1, 1])
    np.testing.assert_array_equal(delta_2([1.0, 0, 0, 0], 1.0), [-2, 1, 0, 1])
    np.testing.assert_array_equal(mu_space([0.0, 2, 0, 2]), [1, 1, 1, 1])


def test_forward_difference_is_shifted_backward_difference(rng):
    r = rng.standard_normal(11)
    np.testing.assert_allclose(np.roll(delta_plus(r, 0.3), 1), delta_minus(r, 0.3), rtol=0, atol=1e-14)


def test_second_difference_matches_dense_cyclic_matrix(rng):
    n, dx = 12, 0.37
    D = (np.diag(-2 * np.ones(n)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1))
    D[0, -1] = D[-1, 0] = 1
    D /= dx**2
    r = rng.standard_normal(n)
    np.testing.assert_allclose(delta_2(r, dx), D @ r, atol=1e-12)
    k = 3
    x = np.arange(n) * 2 * math.pi / n
    dxg = 2 * math.pi / n
    f = np.cos(k * x)
    eig = -(2 / dxg**2) * (1 - math.cos(k * dxg))
    np.testing.assert_allclose(delta_2(f, dxg), eig * f, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(periodic, periodic)
def test_summation_by_parts(f, g):
    n = min(f.size, g.size)
    f, g = f[:n], g[:n]
    lhs = np.dot(delta_plus(f, 0.5), g) + np.dot(f, delta_minus(g, 0.5))
    scale = 1 + np.abs(f).sum() * np.abs(g).sum()
    assert abs(lhs) <= 1e-12 * scale


@settings(max_examples=60, deadline=None)
@given(periodic)
def test_composition_and_telescoping(f):
    dx = 0.25
    d2 = delta_2(f, dx)
    ulp = 4 * np.spacing(np.abs(f).max() / dx**2 * 4 + 1)
    assert np.max(np.abs(delta_minus(delta_plus(f, dx), dx) - d2)) <= ulp
    assert np.max(np.abs(delta_plus(delta_minus(f, dx), dx) - d2)) <= ulp
    assert abs(delta_plus(f, dx).sum()) <= 1e-13 * (1 + np.abs(f).sum() / dx)


def test_operators_are_linear(rng):
    f, g = rng.standard_normal(9), rng.standard_normal(9)
    a, b = 1.7, -0.4
    for op in (lambda x: delta_plus(x, 0.2), lambda x: delta_minus(x, 0.2), lambda x: delta_2(x, 0.2), mu_space):
        np.testing.assert_allclose(op(a * f + b * g), a * op(f) + b * op(g), atol=1e-11)


def test_time_average(rng):
    f = ComplexField(rng.standard_normal(5), rng.standard_normal(5))
    g = ComplexField(rng.standard_normal(5), rng.standard_normal(5))
    same = mu_time(f, f)
    np.testing.assert_array_equal(same.u, f.u)
    half = mu_time(ComplexField.zeros(5), f)
    np.testing.assert_array_equal(half.v, f.v / 2)
    h = ComplexField(rng.standard_normal(5), rng.standard_normal(5))
    k = ComplexField(rng.standard_normal(5), rng.standard_normal(5))
    a, b = 2.5, -1.5
    comb = lambda p, q: ComplexField(a * p.u + b * q.u, a * p.v + b * q.v)
    lin = mu_time(comb(f, g), comb(h, k))
    ref = comb(mu_time(f, h), mu_time(g, k))
    np.testing.assert_allclose(lin.u, ref.u, atol=1e-14)
    np.testing.assert_allclose(lin.v, ref.v, atol=1e-14)
    with pytest.raises(DomainError):
        mu_time(f, ComplexField.zeros(4))


def test_non_finite_rejected():
    with pytest.raises(DomainError):
        delta_plus([0.0, np.nan, 1.0], 1.0)
    with pytest.raises(DomainError):
        ComplexField([1.0, np.inf], [0.0, 0.0])


def test_grid_spec_benchmark():
    g = GridSpec.from_spacing(-math.pi / 7, math.pi / 7, 2 * math.pi / 7000, 0.5, 0.01)
    assert g.M - 1 == 1000 and g.N == 50
    assert abs(g.dx * (g.M - 1) - (g.b - g.a)) <= 4 * np.spacing(g.b - g.a)
    assert abs(g.dt * g.N - g.T) <= 4 * np.spacing(g.T)
    assert g.x.size == 1000 and g.x[0] == g.a


@pytest.mark.parametrize("kw", [dict(M=2), dict(b=-1.0), dict(N=0)])
def test_grid_spec_rejects(kw):
    base = dict(a=0.0, b=1.0, M=5, T=1.0, N=4)
    base.update(kw)
    with pytest.raises(DomainError):
        GridSpec(**base)


def test_grid_spacing_must_divide():
    with pytest.raises(DomainError):
        GridSpec.from_spacing(0.0, 1.0, 0.3, 1.0, 0.1)
