"""Breather experiments: single runs, step-halving sweeps and CSV output."""
from __future__ import annotations

import ast
import dataclasses
import math
import operator
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .breather import BreatherParams, breather, breather_field, order_estimate, sol_err
from .conservation import DiagnosticsAccumulator
from .errors import DomainError, SolverError
from .grid import GridSpec
from .newton import SolverConfig, step
from .schemes import SchemeKind, Variant

__all__ = [
    "CSV_COLUMNS",
    "PRESETS",
    "RunConfig",
    "RunRow",
    "RunReport",
    "halving_sweep",
    "run_single",
    "run_sweep",
    "parse_config_text",
    "load_config_file",
]

CSV_COLUMNS = (
    "scheme",
    "dt",
    "dx",
    "omega",
    "beta",
    "sol_err",
    "order",
    "err_cl_charge",
    "err_cl_energy",
    "err_inv_charge",
    "err_inv_energy",
    "newton_iters",
    "wall_seconds",
    "status",
)


def halving_sweep(k_max: int = 5, dt0: float = 0.01) -> List[float]:
    return [dt0 / 2**k for k in range(k_max + 1)]


@dataclass(frozen=True)
class RunConfig:
    scheme: SchemeKind
    grid: GridSpec
    breather: BreatherParams = BreatherParams()
    solver: SolverConfig = SolverConfig()
    sweep: Optional[Sequence[float]] = None
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.scheme.fitted:
            for dt in self.dts():
                if self.scheme.omega * dt >= math.pi:
                    raise DomainError(f"omega*dt = {self.scheme.omega * dt:.4g} reaches the fitting pole")

    def dts(self) -> List[float]:
        return list(self.sweep) if self.sweep else [self.grid.dt]

    def grid_for(self, dt: float) -> GridSpec:
        g = self.grid
        return GridSpec.from_spacing(g.a, g.b, g.dx, g.T, dt)


@dataclass
class RunRow:
    scheme: str
    dt: float
    dx: float
    omega: float
    beta: float
    sol_err: float = float("nan")
    order: str = ""
    err_cl_charge: float = 0.0
    err_cl_energy: float = 0.0
    err_inv_charge: float = 0.0
    err_inv_energy: float = 0.0
    newton_iters: int = 0
    wall_seconds: float = 0.0
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _cell(value, timing: bool, name: str) -> str:
    if name == "wall_seconds" and not timing:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


@dataclass
class RunReport:
    rows: List[RunRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def for_scheme(self, name: str) -> List[RunRow]:
        return [r for r in self.rows if r.scheme == name]

    def csv_text(self, timing: bool = True) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for row in self.rows:
            lines.append(",".join(_cell(getattr(row, c), timing, c) for c in CSV_COLUMNS))
        return "\n".join(lines) + "\n"

    def write(self, directory, timing: bool = True) -> List[Path]:
        """Write ``results.csv`` and one ``(dt, sol_err)`` file per scheme."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        written = [out / "results.csv"]
        written[0].write_text(self.csv_text(timing))
        for name in dict.fromkeys(r.scheme for r in self.rows):
            path = out / f"sol_err_{name}.dat"
            body = "".join(f"{r.dt:.17g} {r.sol_err:.17g}\n" for r in self.for_scheme(name))
            path.write_text("# dt sol_err\n" + body)
            written.append(path)
        return written

    def table(self) -> str:
        head = (
            f"{'scheme':>7} {'dt':>10} {'Sol err':>10} {'Order':>6} {'Err1':>9} "
            f"{'Err2':>9} {'ErrM':>9} {'ErrH':>9} {'iters':>6}  status"
        )
        lines = [head]
        for r in self.rows:
            lines.append(
                f"{r.scheme:>7} {r.dt:10.3e} {r.sol_err:10.2e} {_fmt_order(r.order):>6} {r.err_cl_charge:9.2e} "
                f"{r.err_cl_energy:9.2e} {r.err_inv_charge:9.2e} {r.err_inv_energy:9.2e} "
                f"{r.newton_iters:6d}  {r.status}"
            )
        return "\n".join(lines)


def _integrate(config: RunConfig, dt: float) -> RunRow:
    grid = config.grid_for(dt) if config.sweep else config.grid
    kind = config.scheme
    row = RunRow(kind.name, grid.dt if grid.N else dt, grid.dx, kind.omega, config.breather.beta)
    t0 = time.perf_counter()
    z = breather_field(config.breather, grid.x, 0.0)
    acc = DiagnosticsAccumulator(grid, kind)
    acc.push(z)
    for n in range(grid.N):
        try:
            z, stats = step(kind, z, grid, config.solver)
        except SolverError as exc:
            row.status = f"failed at step {n}: {exc}"
            if exc.stats is not None:
                row.newton_iters += exc.stats.iterations
            break
        row.newton_iters += stats.iterations
        acc.push(z)
    else:
        exact = breather(config.breather, grid.x, grid.T)
        row.sol_err = sol_err(z, exact.real, exact.imag)
    row.err_cl_charge, row.err_cl_energy = acc.err1, acc.err2
    row.err_inv_charge, row.err_inv_energy = acc.errM, acc.errH
    row.wall_seconds = time.perf_counter() - t0
    return row


def run_single(config: RunConfig) -> RunReport:
    """Integrate the breather from ``t = 0`` to ``T`` and collect every diagnostic."""
    return RunReport([_integrate(replace(config, sweep=None), config.grid.dt)])


def _fill_orders(rows: List[RunRow]) -> None:
    good = [r for r in rows if r.ok and r.sol_err > 0]
    if len(good) != len(rows) or len(rows) < 2:
        return
    for row, est in zip(rows[1:], order_estimate([r.sol_err for r in rows])):
        row.order = str(est) if est.at_floor else f"{est.order:.17g}"


def _fmt_order(cell: str) -> str:
    if cell in ("", "***"):
        return cell
    return f"{float(cell):.2f}"


def _task(args):
    config, dt = args
    return _integrate(config, dt)


def run_sweep(config: RunConfig, jobs: int = 1) -> RunReport:
    """Run every step size of the sweep and append the observed orders.

    Rows are sorted by decreasing ``dt`` regardless of completion order.
    """
    dts = config.sweep or halving_sweep()
    config = replace(config, sweep=list(dts))
    tasks = [(config, dt) for dt in dts]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_task, tasks))
    else:
        rows = [_task(t) for t in tasks]
    rows.sort(key=lambda r: -r.dt)
    _fill_orders(rows)
    return RunReport(rows)


# -- configuration ---------------------------------------------------------

PRESETS: Dict[str, Dict[str, str]] = {
    "breather-paper": {
        "scheme.variant": "dvd",
        "omega": "25",
        "breather.beta": "1.4",
        "grid.a": "-pi/7",
        "grid.b": "pi/7",
        "grid.dx": "2*pi/7000",
        "grid.T": "0.5",
        "grid.dt": "0.01",
        "sweep.k_max": "5",
    },
}

_DEFAULTS = dict(PRESETS["breather-paper"])

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def _number(text: str) -> float:
    """Evaluate a numeric literal or a small arithmetic expression in ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise DomainError(f"unsupported numeric expression {text!r}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise DomainError(f"bad number {text!r}") from None
    return ev(tree)


_KNOWN_KEYS = {
    "scheme.variant",
    "scheme.omega",
    "omega",
    "breather.beta",
    "breather.omega",
    "grid.a",
    "grid.b",
    "grid.dx",
    "grid.T",
    "grid.dt",
    "solver.tol_residual",
    "solver.tol_increment",
    "solver.max_iters",
    "sweep.k_max",
    "sweep.dts",
    "sweep.enabled",
    "output_path",
}


def parse_config_text(text: str) -> Dict[str, str]:
    """Flat ``key = value`` pairs; ``#`` starts a comment."""
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise DomainError(f"line {lineno}: unknown key {key!r}")
        values[key] = val
    return values


def load_config_file(path) -> Dict[str, str]:
    return parse_config_text(Path(path).read_text())


def build_config(values: Dict[str, str], sweep: Optional[bool] = None) -> RunConfig:
    """Assemble a :class:`RunConfig` from flat values layered over the benchmark preset."""
    v = dict(_DEFAULTS)
    v.update(values)
    omega = _number(v["omega"])
    scheme_omega = _number(v.get("scheme.omega", str(omega)))
    breather_omega = _number(v.get("breather.omega", str(omega)))
    kind = SchemeKind.parse(v["scheme.variant"], scheme_omega)
    a, b = _number(v["grid.a"]), _number(v["grid.b"])
    T, dt = _number(v["grid.T"]), _number(v["grid.dt"])
    grid = GridSpec.from_spacing(a, b, _number(v["grid.dx"]), T, dt)
    solver = SolverConfig(
        tol_residual=_number(v.get("solver.tol_residual", "1e-12")),
        tol_increment=_number(v.get("solver.tol_increment", "1e-8")),
        max_iters=int(_number(v.get("solver.max_iters", "20"))),
    )
    if sweep is None:
        sweep = v.get("sweep.enabled", "false").lower() in ("1", "true", "yes")
    dts = None
    if sweep:
        if "sweep.dts" in v:
            dts = [_number(s) for s in v["sweep.dts"].split(",") if s.strip()]
        else:
            dts = halving_sweep(int(_number(v["sweep.k_max"])), dt)
    return RunConfig(
        scheme=kind,
        grid=grid,
        breather=BreatherParams(_number(v["breather.beta"]), breather_omega),
        solver=solver,
        sweep=dts,
        output_path=v.get("output_path"),
    )


def scheme_names(spec: str) -> List[str]:
    if spec.strip().lower() == "all":
        return [m.value for m in Variant]
    return [s.strip() for s in spec.split(",") if s.strip()]
