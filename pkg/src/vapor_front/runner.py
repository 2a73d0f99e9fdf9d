"""Batch driver: field snapshots, front integration, verification report.

Tables are CSV with a ``#`` comment header carrying the code version and the
full scenario; floats use shortest round-trip ``repr`` so identical
scenarios give byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, NumericError, SimulationError
from .fields import asymptotic_pressure, pressure_profile
from .front import (
    FrontTrajectory,
    advance_front,
    check_domination,
    delta_infinity,
    plateau_constant,
)
from .numerics import QuadratureLog
from .physics import saturation_pressure, temperature, viscosity
from .scenario import Scenario, format_scenario

EXIT_PASS = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

SWEEP_PARAMETERS = {
    "theta_E": "bc",
    "p_E": "bc",
    "q": "bc",
    "lambda_i": "fluid",
    "K": "medium",
}


@dataclass
class RunReport:
    """Verification summary of one run; produced even when the run fails."""

    status: str = "PASS"
    exit_code: int = EXIT_PASS
    levels: list[dict] = field(default_factory=list)
    convergence: dict = field(default_factory=dict)
    verifications: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    files: list[str] = field(default_factory=list)

    def fail(self, message: str, code: int) -> None:
        self.failures.append(message)
        # numeric failure outranks a verification failure
        self.exit_code = max(self.exit_code, code)
        self.status = "ERROR" if self.exit_code == EXIT_NUMERIC else "FAIL"

    def to_dict(self) -> dict:
        return _json_safe(dataclasses.asdict(self))


def _json_safe(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    return obj


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def format_table(scenario: Scenario, title: str, header: list[str], rows: list[list]) -> str:
    """CSV text: comment block, header row, data rows; LF line endings."""
    buf = io.StringIO()
    buf.write(f"# vapor_front {__version__}\n# table: {title}\n")
    for line in format_scenario(scenario).splitlines():
        if line:
            buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([[_fmt(v) for v in row] for row in rows])
    return buf.getvalue()


def _rows_finite(rows: list[list]) -> bool:
    return all(
        math.isfinite(v) for row in rows for v in row if isinstance(v, (float, np.floating))
    )


def x2_grid(scenario: Scenario) -> np.ndarray:
    return np.linspace(0.0, scenario.medium.L, scenario.sim.n_grid)


def _snapshot_times(scenario: Scenario) -> list[float]:
    return list(scenario.sim.output_times) or [scenario.sim.t_end]


def field_rows(scenario: Scenario, log: QuadratureLog) -> list[list]:
    m, f, bc, sim = scenario.medium, scenario.fluid, scenario.bc, scenario.sim
    grid = x2_grid(scenario)
    rows = []
    for t in _snapshot_times(scenario):
        profile = pressure_profile(m, f, bc, grid, t, sim.pressure_tol(bc), log)
        for x, p in zip(grid, profile.p_values):
            theta = temperature(m, bc, float(x), t)
            p_vs = saturation_pressure(f, bc, theta)
            frac = max(0.0, (p - p_vs) / p)
            rows.append([t, float(x), theta, viscosity(f, bc, theta), float(p), p_vs, frac])
    return rows


def asymptotic_rows(scenario: Scenario, log: QuadratureLog) -> list[list]:
    m, f, bc, sim = scenario.medium, scenario.fluid, scenario.bc, scenario.sim
    grid = x2_grid(scenario)
    t = sim.t_end
    profile = pressure_profile(m, f, bc, grid, t, sim.pressure_tol(bc), log)
    rows = []
    for x, p in zip(grid, profile.p_values):
        x = float(x)
        p_vs = saturation_pressure(f, bc, temperature(m, bc, x, t))
        rows.append([
            x,
            float(p),
            asymptotic_pressure(m, f, bc, x),
            max(0.0, (p - p_vs) / p),
            delta_infinity(m, f, bc, x),
        ])
    return rows


def trajectory_rows(scenario: Scenario, trajectories: list[FrontTrajectory]) -> list[list]:
    keep = set(_snapshot_times(scenario)) | {0.0, scenario.sim.t_end}
    rows = []
    for traj in trajectories:
        for s in traj.samples:
            if any(math.isclose(s.t, k, rel_tol=1e-12, abs_tol=1e-15) for k in keep):
                rows.append([traj.z, s.t, s.x2_front, s.k0, traj.w0 - s.k0])
    return rows


def _level_entry(scenario: Scenario, traj: FrontTrajectory) -> dict:
    m, f, bc, sim = scenario.medium, scenario.fluid, scenario.bc, scenario.sim
    dom = check_domination(m, f, bc, sim, traj)
    return {
        "z": traj.z,
        "w0": traj.w0,
        "bound": traj.bound,
        "bound_applicable": traj.bound_applicable,
        "bound_note": "" if traj.bound_applicable else "bound not applicable",
        "final_t": traj.final.t,
        "final_x2": traj.final.x2_front,
        "final_velocity": traj.w0 - traj.final.k0,
        "dt": traj.dt,
        "halving_delta": traj.halving_delta,
        "converged": traj.converged,
        "domination_checked": dom.checked,
        "domination_passed": dom.passed,
        "domination_note": dom.reason,
        "burn_in_time": dom.t_burn,
        "majorant_max_ratio": dom.max_ratio,
        "all_below_bound": dom.all_below_bound,
    }


def run(scenario: Scenario, out_dir: str | Path | None = None) -> RunReport:
    """Evaluate fields, integrate every front level and verify the results.

    Writes ``fields.csv``, ``trajectory.csv``, ``asymptotic.csv`` and
    ``report.json`` into ``out_dir`` per the scenario's output selection;
    nothing is written when ``out_dir`` is None.
    """
    m, f, bc, sim = scenario.medium, scenario.fluid, scenario.bc, scenario.sim
    report = RunReport()
    log = QuadratureLog()
    tables: dict[str, tuple[str, list[str], list[list]]] = {}
    trajectories: list[FrontTrajectory] = []

    try:
        if scenario.outputs.fields:
            tables["fields.csv"] = (
                "field snapshots",
                ["t", "x2", "theta", "eta", "p_i", "p_vs", "delta"],
                field_rows(scenario, log),
            )
            tables["asymptotic.csv"] = (
                "large-time comparison at t_end",
                ["x2", "p_i", "p_i_inf", "delta", "delta_inf"],
                asymptotic_rows(scenario, log),
            )
        for z in sim.z_levels:
            trajectories.append(advance_front(m, f, bc, sim, z, sim.t_end, log=log))
    except SimulationError as exc:
        if exc.partial is not None:
            trajectories.append(exc.partial)
        report.fail(f"numeric failure: {exc}", EXIT_NUMERIC)
    except NumericError as exc:
        report.fail(f"numeric failure: {exc}", EXIT_NUMERIC)

    if scenario.outputs.trajectory and trajectories:
        tables["trajectory.csv"] = (
            "front trajectory",
            ["z", "t", "x2_front", "k0", "velocity"],
            trajectory_rows(scenario, trajectories),
        )

    complete = [t for t in trajectories if not math.isnan(t.halving_delta)]
    report.levels = [_level_entry(scenario, t) for t in complete]
    halving = [t.halving_delta for t in complete]
    report.convergence = {
        "ode_rel_tol": sim.ode_rel_tol,
        "max_halving_delta": max(halving) if halving else math.nan,
        "quad_tol": sim.quad_tol,
        "max_quad_err_estimate": log.max_err_estimate,
        "max_quad_err_ratio": log.max_err_ratio,
        "quad_calls": log.calls,
        "quad_evaluations": log.evaluations,
        "plateau_constant": plateau_constant(f, bc),
    }

    checks = report.verifications
    checks["ode_step_halving"] = bool(complete) and all(t.converged for t in complete)
    checks["quadrature_tolerance"] = log.max_err_ratio <= 1.0
    dominated = [lv["domination_passed"] for lv in report.levels if lv["domination_checked"]]
    checks["bound_domination"] = all(dominated) if dominated else None
    checks["finite_tables"] = all(_rows_finite(rows) for _, _, rows in tables.values())

    for name, ok in checks.items():
        if ok is False:
            report.fail(f"verification failed: {name}", EXIT_VERIFICATION)

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for fname, (title, header, rows) in tables.items():
            (out / fname).write_text(
                format_table(scenario, title, header, rows), encoding="utf-8", newline="\n"
            )
            report.files.append(fname)
        if scenario.outputs.report:
            report.files.append("report.json")
            write_report(report, out / "report.json")
    return report


def write_report(report: RunReport, path: Path) -> None:
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")


def with_parameter(scenario: Scenario, parameter: str, value: float) -> Scenario:
    """Copy of ``scenario`` with one driving parameter replaced (re-validated)."""
    if parameter not in SWEEP_PARAMETERS:
        raise DomainError(
            f"cannot sweep {parameter!r}; choose one of {', '.join(SWEEP_PARAMETERS)}"
        )
    section = SWEEP_PARAMETERS[parameter]
    part = dataclasses.replace(getattr(scenario, section), **{parameter: value})
    return dataclasses.replace(scenario, **{section: part})


def _sweep_one(args: tuple[Scenario, str, float]) -> list[dict]:
    scenario, parameter, value = args
    try:
        sc = with_parameter(scenario, parameter, value)
        sc = dataclasses.replace(sc, outputs=dataclasses.replace(sc.outputs, fields=False))
        report = run(sc)
    except (DomainError, NumericError) as exc:
        return [{"value": value, "status": "ERROR", "error": str(exc)}]
    rows = []
    for lv in report.levels:
        rows.append({
            "value": value,
            "z": lv["z"],
            "final_x2": lv["final_x2"],
            "bound": lv["bound"],
            "bound_applicable": lv["bound_applicable"],
            "plateau_constant": report.convergence["plateau_constant"],
            "status": report.status,
            "error": "; ".join(report.failures),
        })
    if not rows:
        rows.append({"value": value, "status": report.status, "error": "; ".join(report.failures)})
    return rows


SWEEP_HEADER = ["value", "z", "final_x2", "bound", "bound_applicable", "plateau_constant", "status", "error"]


def sweep(
    scenario: Scenario,
    parameter: str,
    values: list[float],
    out_dir: str | Path | None = None,
    workers: int = 1,
) -> list[dict]:
    """One independent run per value; failures stay confined to their rows.

    Writes ``sweep.csv`` into ``out_dir`` when given. Inapplicable bounds are
    left blank rather than written as infinity.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise DomainError(
            f"cannot sweep {parameter!r}; choose one of {', '.join(SWEEP_PARAMETERS)}"
        )
    jobs = [(scenario, parameter, float(v)) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(job) for job in jobs]
    rows = [row for chunk in results for row in chunk]
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        table = []
        for row in rows:
            line = []
            for key in SWEEP_HEADER:
                v = row.get(key, "")
                if isinstance(v, float) and not math.isfinite(v):
                    v = ""
                line.append(v)
            table.append(line)
        text = format_table(scenario, f"sweep over {parameter}", SWEEP_HEADER, table)
        (out / "sweep.csv").write_text(text, encoding="utf-8", newline="\n")
    return rows


def check(scenario: Scenario) -> dict[str, bool]:
    """Field invariants on the scenario's grid and snapshot times, no front integration."""
    m, f, bc, sim = scenario.medium, scenario.fluid, scenario.bc, scenario.sim
    grid = x2_grid(scenario)
    times = sorted(set(_snapshot_times(scenario)))
    log = QuadratureLog()
    results = {}

    thetas = np.array([[temperature(m, bc, float(x), t) for x in grid] for t in times])
    results["temperature_bounds"] = bool(
        np.all(thetas >= bc.theta_S) and np.all(thetas <= bc.theta_E)
    )
    results["temperature_decreasing_in_x2"] = bool(np.all(np.diff(thetas, axis=1) <= 0.0))
    results["temperature_increasing_in_t"] = bool(np.all(np.diff(thetas, axis=0) >= 0.0))

    th = np.linspace(bc.theta_S, bc.theta_E, 64)
    p_vs = np.array([saturation_pressure(f, bc, float(v)) for v in th])
    results["saturation_pressure_increasing"] = bool(np.all(np.diff(p_vs) > 0.0))
    eta = np.array([viscosity(f, bc, float(v)) for v in th])
    results["viscosity_positive"] = bool(np.all(eta > 0.0)) and viscosity(f, bc, bc.theta_E) == f.eta_E

    pressure_ok = True
    delta_ok = True
    for t, row in zip(times, thetas):
        p = pressure_profile(m, f, bc, grid, t, sim.pressure_tol(bc), log).p_values
        pressure_ok &= bool(p[0] == bc.p_E and np.all(np.diff(p) <= 0.0) and np.all(p >= bc.p_S))
        for pi, theta in zip(p, row):
            pv = saturation_pressure(f, bc, float(theta))
            d = max(0.0, (pi - pv) / pi)
            delta_ok &= 0.0 <= d < 1.0 and ((d == 0.0) == (pi <= pv))
    results["pressure_profile"] = pressure_ok
    results["delta_range"] = delta_ok

    p_inf = np.array([asymptotic_pressure(m, f, bc, float(x)) for x in grid])
    results["asymptotic_pressure_profile"] = bool(
        p_inf[0] == bc.p_E and np.all(np.diff(p_inf) <= 0.0) and np.all(p_inf >= bc.p_S)
    )
    results["quadrature_tolerance"] = log.max_err_ratio <= 1.0
    return results
