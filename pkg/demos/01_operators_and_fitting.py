"""
Grid operators and the fitted weight
====================================

A short tour of the periodic difference operators and the weight alpha
that makes the two-point time rule exact on {1, cos(wt), sin(wt)}.
"""

import math

import numpy as np

from efdvd import FitParams, GridSpec, alpha
from efdvd.fitting import check_fitting_exactness
from efdvd.grid import delta_2, delta_minus, delta_plus

# a coarse periodic grid on [0, 2pi): 33 nodes, 32 unknowns
grid = GridSpec(0.0, 2 * math.pi, 33, 1.0, 10)
x = grid.x
f = np.sin(3 * x)

# second differences of sin(3x) approach -9 sin(3x) at rate dx^2
err = np.max(np.abs(delta_2(f, grid.dx) + 9 * f))
print(f"dx = {grid.dx:.4f}   |delta_2 f + 9 f| = {err:.3e}")

# delta_plus o delta_minus is delta_2 on a periodic grid
print("composition gap:", np.max(np.abs(delta_plus(delta_minus(f, grid.dx), grid.dx) - delta_2(f, grid.dx))))

# summation by parts: sum f * delta_plus g = -sum delta_minus f * g
g = np.cos(x) ** 2
print("summation by parts:", abs(np.sum(f * delta_plus(g, grid.dx)) + np.sum(delta_minus(f, grid.dx) * g)))

# the weight alpha(theta) with theta = omega*dt
for theta in (1e-6, 0.01, 0.25, 1.0, 3.0):
    p = FitParams(theta / 0.01, 0.01)
    print(f"theta = {theta:<6g} alpha = {alpha(p):.15f}   fitting defect = {check_fitting_exactness(p, 0.3):.1e}")

# alpha blows up at the first pole theta = pi, which is rejected
try:
    FitParams(math.pi / 0.01, 0.01)
except ValueError as exc:
    print("rejected:", exc)
