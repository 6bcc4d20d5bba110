"""Energy-conserving DVD/AVF time integrators (classic and exponentially fitted) for the NLS equation."""
from .breather import BreatherParams, breather, breather_field, order_estimate, sol_err
from .conservation import global_invariants, local_cl_residuals
from .errors import ConvergenceError, DomainError, SingularJacobianError, SolverError
from .fitting import FitParams, alpha
from .grid import ComplexField, GridSpec
from .newton import NewtonStats, SolverConfig, step
from .runner import RunConfig, RunReport, run_single, run_sweep
from .schemes import SchemeKind, StepPair, Variant, residual

__version__ = "0.1.0"
