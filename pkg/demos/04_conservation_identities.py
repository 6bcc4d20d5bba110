"""
Conservation laws in characteristic form
========================================

The discrete conservation laws are algebraic identities: the divergence of
(flux, density) equals a multiplier times the scheme residual, for any two
time levels and not only for solutions. Here we check that on random data
and then watch it collapse to roundoff on an actual step.
"""

import math

import numpy as np

from efdvd import ComplexField, GridSpec, SchemeKind, step
from efdvd.conservation import (
    charge_cl_residual,
    charge_multiplier,
    energy_cl_residual,
    energy_multiplier,
)
from efdvd.schemes import StepPair, residual_avf, residual_dvd

rng = np.random.default_rng(1)
n = 15
pair = StepPair(
    ComplexField(rng.standard_normal(n), rng.standard_normal(n)),
    ComplexField(rng.standard_normal(n), rng.standard_normal(n)),
    0.1,
    2 * math.pi / n,
)

# random levels: the residual is large, yet the identities hold to roundoff
r = residual_dvd(pair, 0.7)
C = charge_multiplier(pair)
print("residual size           ", np.abs(r[0]).max())
print("charge identity gap     ", np.abs(charge_cl_residual(pair, 0.7) - (C[0] * r[0] + C[1] * r[1])).max())
E = energy_multiplier(pair)
for name, res in (("dvd", residual_dvd), ("avf", residual_avf)):
    r = res(pair)
    print(f"energy identity gap {name} ", np.abs(energy_cl_residual(pair) - (E[0] * r[0] + E[1] * r[1])).max())

# on a solved step the residual vanishes, so the local laws hold
grid = GridSpec(0.0, 2 * math.pi, n + 1, 0.1, 1)
z1, stats = step(SchemeKind.parse("dvd"), pair.zn, grid)
solved = StepPair(pair.zn, z1, grid.dt, grid.dx)
print(f"newton iterations {stats.iterations}")
print("local charge law        ", np.abs(charge_cl_residual(solved, 1.0)).max())
print("local energy law        ", np.abs(energy_cl_residual(solved)).max())
