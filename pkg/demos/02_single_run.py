"""
One breather run
================

Integrate the breather to T = 0.5 with the fitted DVD scheme and look at
the error and the conservation diagnostics.
"""

import math

from efdvd import BreatherParams, GridSpec, RunConfig, SchemeKind, breather_field, run_single

params = BreatherParams(beta=1.4, omega=25.0)
grid = GridSpec.from_spacing(-math.pi / 7, math.pi / 7, 2 * math.pi / 7000, 0.5, 0.01)
print(f"{grid.n_unknowns} unknowns, {grid.N} steps of dt = {grid.dt}")

# initial data is real; for beta = 1.4 the peak is sqrt(omega) + sqrt(2)
z0 = breather_field(params, grid.x, 0.0)
print("max |z(x,0)| =", abs(z0.z).max())

kind = SchemeKind.parse("ef-dvd", omega=25.0)
print("fitted weight alpha =", kind.alpha(grid.dt))

report = run_single(RunConfig(kind, grid, params))
print(report.table())

row = report.rows[0]
# the charge and the energy are conserved to roundoff, the solution error
# is dominated by the time step at this resolution
print(f"sol_err {row.sol_err:.3e}, charge drift {row.err_inv_charge:.1e}, energy drift {row.err_inv_energy:.1e}")
