import math

import numpy as np
import pytest

from efdvd.grid import ComplexField, GridSpec
from efdvd.runner import RunConfig, halving_sweep, run_sweep
from efdvd.schemes import SchemeKind, StepPair

BENCH_DX = 2 * math.pi / 7000
BENCH_OMEGA = 25.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_pair(rng, n=15, dt=0.1, dx=None):
    dx = 2 * math.pi / n if dx is None else dx
    zn = ComplexField(rng.standard_normal(n), rng.standard_normal(n))
    znp1 = ComplexField(rng.standard_normal(n), rng.standard_normal(n))
    return StepPair(zn, znp1, dt, dx)


def bench_grid(dt=0.01, T=0.5):
    return GridSpec.from_spacing(-math.pi / 7, math.pi / 7, BENCH_DX, T, dt)


_SWEEPS = {}


def sweeps_for_acceptance():
    """Full six-step sweep of every scheme on the benchmark, computed once."""
    if not _SWEEPS:
        for name in ("dvd", "ef-dvd", "avf", "ef-avf"):
            cfg = RunConfig(SchemeKind.parse(name, BENCH_OMEGA), bench_grid(), sweep=halving_sweep())
            _SWEEPS[name] = run_sweep(cfg).rows
    return _SWEEPS


@pytest.fixture(scope="session")
def benchmark_sweeps():
    return sweeps_for_acceptance()
