import csv
import io
import math

import numpy as np
import pytest

from conftest import bench_grid
from efdvd.cli import main
from efdvd.errors import DomainError
from efdvd.grid import GridSpec
from efdvd.newton import SolverConfig
from efdvd.runner import (
    CSV_COLUMNS,
    RunConfig,
    build_config,
    halving_sweep,
    parse_config_text,
    run_single,
    run_sweep,
    scheme_names,
)
from efdvd.runner import _number
from efdvd.schemes import SchemeKind


def short_config(name="dvd", T=0.02, **kw):
    return RunConfig(SchemeKind.parse(name, 25.0), bench_grid(dt=0.01, T=T), **kw)


def test_number_expressions():
    assert _number("2*pi/7000") == 2 * math.pi / 7000
    assert _number("-pi/7") == -math.pi / 7
    assert _number("1e-12") == 1e-12
    assert _number("0.01/2**5") == 0.01 / 32
    for bad in ("__import__('os')", "pi(", "x"):
        with pytest.raises(DomainError):
            _number(bad)


def test_config_parsing():
    v = parse_config_text("# comment\nscheme.variant = avf\ngrid.T = 0.1  # inline\n\n")
    assert v == {"scheme.variant": "avf", "grid.T": "0.1"}
    with pytest.raises(DomainError, match="unknown key"):
        parse_config_text("grid.nx = 3")
    with pytest.raises(DomainError, match="key=value"):
        parse_config_text("grid.T")


def test_build_config_preset_defaults():
    cfg = build_config({})
    assert cfg.scheme.name == "dvd" and cfg.grid.M == 1001 and cfg.grid.N == 50
    assert cfg.sweep is None
    swept = build_config({"scheme.variant": "ef-dvd"}, sweep=True)
    assert swept.dts() == halving_sweep()
    assert swept.scheme.omega == 25.0


def test_config_rejects_fitting_pole_and_bad_grid():
    with pytest.raises(DomainError):
        build_config({"scheme.variant": "ef-dvd", "omega": "400"})
    with pytest.raises(DomainError):
        build_config({"grid.dx": "0.3"})


def test_scheme_names():
    assert scheme_names("all") == ["dvd", "ef-dvd", "avf", "ef-avf"]
    assert scheme_names("dvd, avf") == ["dvd", "avf"]


def test_zero_final_time():
    cfg = RunConfig(SchemeKind.parse("dvd"), GridSpec.from_spacing(-math.pi / 7, math.pi / 7, 2 * math.pi / 7000, 0.0, 0.01))
    row = run_single(cfg).rows[0]
    assert row.ok and row.sol_err == 0.0 and row.newton_iters == 0
    assert row.err_cl_charge == row.err_cl_energy == row.err_inv_charge == row.err_inv_energy == 0.0


def test_csv_schema_and_stability():
    cfg = short_config(sweep=[0.01, 0.005])
    a = run_sweep(cfg)
    b = run_sweep(cfg)
    text = a.csv_text(timing=False)
    assert text == b.csv_text(timing=False)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [float(r["dt"]) for r in rows] == [0.01, 0.005]
    assert rows[0]["order"] == "" and float(rows[1]["order"]) > 0
    assert all(r["wall_seconds"] == "" and r["status"] == "ok" for r in rows)
    assert float(a.csv_text().splitlines()[1].split(",")[12]) >= 0


def test_floor_token_in_csv():
    from efdvd.runner import RunReport, RunRow, _fill_orders

    rows = [RunRow("dvd", 0.01 / 2**k, 0.1, 25.0, 1.4, sol_err=e) for k, e in enumerate([1e-2, 2.5e-3, 1.0e-3, 1.01e-3])]
    _fill_orders(rows)
    assert rows[-1].order == "***" and rows[1].order.startswith("2")
    assert "***" in RunReport(rows).csv_text() and "***" in RunReport(rows).table()


def test_parallel_rows_match_serial():
    cfg = short_config(sweep=[0.01, 0.005])
    serial = run_sweep(cfg).csv_text(timing=False)
    assert run_sweep(cfg, jobs=2).csv_text(timing=False) == serial


def test_solver_failure_marks_row():
    cfg = short_config(solver=SolverConfig(max_iters=1))
    report = run_single(cfg)
    row = report.rows[0]
    assert not report.ok and row.status.startswith("failed at step 0")
    assert math.isnan(row.sol_err)


def test_write_outputs(tmp_path):
    report = run_sweep(short_config(sweep=[0.01, 0.005]))
    paths = report.write(tmp_path, timing=False)
    assert {p.name for p in paths} == {"results.csv", "sol_err_dvd.dat"}
    data = np.loadtxt(tmp_path / "sol_err_dvd.dat")
    assert data.shape == (2, 2)


def test_cli_exit_codes(tmp_path, monkeypatch, capsys):
    assert main(["run", "--scheme", "rk4"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["run", "--bogus"])
    assert exc.value.code == 2
    monkeypatch.setenv("EFDVD_OUTPUT_DIR", str(tmp_path))
    assert main(["run", "--scheme", "ef-avf", "--T", "0.02", "--no-timing"]) == 0
    assert (tmp_path / "results.csv").exists()
    assert main(["run", "--T", "0.02", "--max-iters", "1"]) == 3
    cfg = tmp_path / "c.cfg"
    cfg.write_text("scheme.variant = avf\ngrid.T = 0.02\nsweep.k_max = 1\n")
    assert main(["sweep", "--config", str(cfg), "--output", str(tmp_path / "s")]) == 0
    assert len((tmp_path / "s" / "results.csv").read_text().splitlines()) == 3
    capsys.readouterr()


def test_cli_check(capsys):
    assert main(["check", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 9


def test_sweep_shape(benchmark_sweeps):
    for name, rows in benchmark_sweeps.items():
        errs = [r.sol_err for r in rows]
        assert all(r.ok for r in rows)
        pre = [e for e, r in zip(errs, rows) if r.order != "***"]
        # errors shrink until the spatial floor
        assert all(a > b for a, b in zip(pre, pre[1:])), name
        if name in ("dvd", "ef-dvd"):
            n = len(pre)
            slope = np.polyfit(np.log2([r.dt for r in rows[:n]]), np.log2(pre), 1)[0]
            assert 1.8 <= slope <= 2.2, (name, slope)
