import csv
import dataclasses
import json
import math
import subprocess
import sys

import pytest

from vapor_front import write_scenario
from vapor_front.cli import main
from vapor_front.errors import DomainError
from vapor_front.runner import (
    EXIT_INPUT,
    EXIT_NUMERIC,
    EXIT_PASS,
    EXIT_VERIFICATION,
    check,
    run,
    sweep,
    with_parameter,
)
from vapor_front.scenario import reference_scenario


def read_table(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


@pytest.fixture
def fast():
    """Reference physics, one level, one second."""
    sc = reference_scenario()
    sim = dataclasses.replace(sc.sim, z_levels=(0.5,), output_times=(0.5, 1.0), t_end=1.0, n_grid=6)
    return dataclasses.replace(sc, sim=sim)


@pytest.fixture
def dry(fast):
    """Saturation pressure above p_E everywhere: no condensation, bound not applicable."""
    return dataclasses.replace(fast, fluid=dataclasses.replace(fast.fluid, pi_S=1e6))


def sim_replace(sc, **kw):
    return dataclasses.replace(sc, sim=dataclasses.replace(sc.sim, **kw))


class TestRun:
    def test_writes_all_tables(self, fast, tmp_path):
        report = run(fast, tmp_path)
        assert report.exit_code == EXIT_PASS and report.status == "PASS"
        assert sorted(report.files) == ["asymptotic.csv", "fields.csv", "report.json", "trajectory.csv"]
        fields = read_table(tmp_path / "fields.csv")
        assert len(fields) == 2 * 6
        assert list(fields[0]) == ["t", "x2", "theta", "eta", "p_i", "p_vs", "delta"]
        data = json.loads((tmp_path / "report.json").read_text())
        assert data["status"] == "PASS"
        assert data["verifications"]["quadrature_tolerance"] is True

    def test_tables_finite(self, fast, tmp_path):
        run(fast, tmp_path)
        for name in ("fields.csv", "asymptotic.csv", "trajectory.csv"):
            for row in read_table(tmp_path / name):
                assert all(math.isfinite(float(v)) for v in row.values())

    def test_output_selection(self, fast, tmp_path):
        sc = dataclasses.replace(fast, outputs=dataclasses.replace(fast.outputs, fields=False, report=False))
        report = run(sc, tmp_path)
        assert report.files == ["trajectory.csv"]
        assert not (tmp_path / "fields.csv").exists()

    def test_dry_front_is_linear(self, dry, tmp_path):
        report = run(dry, tmp_path)
        assert report.exit_code == EXIT_PASS
        w0 = dry.bc.q / 4
        for row in read_table(tmp_path / "trajectory.csv"):
            assert float(row["x2_front"]) == pytest.approx(w0 * float(row["t"]), rel=1e-12, abs=1e-18)
            assert float(row["k0"]) == 0.0

    def test_huge_clapeyron_constant_is_linear(self, fast):
        sc = dataclasses.replace(fast, fluid=dataclasses.replace(fast.fluid, lambda_i=1e6))
        sc = sim_replace(sc, output_times=(0.5, 1.0, 2.0), t_end=2.0)
        report = run(sc)
        assert report.exit_code == EXIT_PASS
        assert report.levels[0]["final_x2"] == pytest.approx(2.0 * sc.bc.q / 4, rel=1e-12)

    def test_inapplicable_bound_flagged(self, dry):
        report = run(dry)
        level = report.levels[0]
        assert level["bound_applicable"] is False
        assert level["bound_note"] == "bound not applicable"
        assert report.verifications["bound_domination"] is None
        assert report.to_dict()["levels"][0]["bound"] is None

    def test_burn_in_not_reached(self, fast):
        level = run(fast).levels[0]
        assert level["domination_checked"] is False
        assert level["domination_note"] == "burn-in not reached"

    def test_numeric_failure_keeps_partial(self, fast, tmp_path):
        report = run(sim_replace(fast, max_steps=10), tmp_path)
        assert report.exit_code == EXIT_NUMERIC and report.status == "ERROR"
        assert (tmp_path / "report.json").exists()

    def test_unconverged_halving_is_verification_failure(self, fast):
        report = run(sim_replace(fast, ode_rel_tol=1e-300, max_halvings=1))
        assert report.exit_code == EXIT_VERIFICATION
        assert "verification failed: ode_step_halving" in report.failures

    def test_deterministic_bytes(self, fast, tmp_path):
        run(fast, tmp_path / "a")
        run(fast, tmp_path / "b")
        for name in ("fields.csv", "asymptotic.csv", "trajectory.csv", "report.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestSweep:
    def test_bound_linear_in_q(self, fast):
        qs = [5e-4, 1e-3, 2e-3]
        rows = sweep(fast, "q", qs)
        bounds = [r["bound"] for r in rows]
        assert all(r["status"] == "PASS" for r in rows)
        for q, b in zip(qs, bounds):
            assert b / q == pytest.approx(bounds[0] / qs[0], rel=1e-13)

    def test_plateau_non_increasing_in_inlet_temperature(self, fast):
        rows = sweep(fast, "theta_E", [300.0, 313.15, 330.0, 350.0])
        cs = [r["plateau_constant"] for r in rows]
        assert all(b <= a for a, b in zip(cs, cs[1:]))

    def test_single_value_equals_run(self, fast):
        rows = sweep(fast, "p_E", [fast.bc.p_E])
        level = run(fast).levels[0]
        assert rows[0]["final_x2"] == level["final_x2"]
        assert rows[0]["bound"] == level["bound"]

    def test_failures_confined_to_row(self, fast, tmp_path):
        # theta_E below theta_S is invalid
        rows = sweep(fast, "theta_E", [280.0, 313.15], tmp_path)
        assert rows[0]["status"] == "ERROR" and "theta_E > theta_S" in rows[0]["error"]
        assert rows[1]["status"] == "PASS"
        table = read_table(tmp_path / "sweep.csv")
        assert len(table) == 2

    def test_inapplicable_bound_blank(self, fast, tmp_path):
        sweep(fast, "p_E", [2e5], tmp_path)
        dry = dataclasses.replace(fast, fluid=dataclasses.replace(fast.fluid, pi_S=1e6))
        sweep(dry, "p_E", [2e5], tmp_path)
        row = read_table(tmp_path / "sweep.csv")[0]
        assert row["bound"] == "" and row["bound_applicable"] == "false"

    def test_parallel_matches_serial(self, fast):
        values = [5e-4, 1e-3]
        assert sweep(fast, "q", values, workers=2) == sweep(fast, "q", values)

    def test_unknown_parameter(self, fast):
        with pytest.raises(DomainError):
            sweep(fast, "psi", [1.0])
        with pytest.raises(DomainError):
            with_parameter(fast, "L", 1.0)


class TestCheck:
    def test_reference_passes(self, fast):
        results = check(fast)
        assert results and all(results.values())


class TestCli:
    def test_run(self, fast, tmp_path, capsys):
        path = tmp_path / "s.txt"
        write_scenario(fast, path)
        code = main(["run", "--scenario", str(path), "--out-dir", str(tmp_path / "out")])
        assert code == EXIT_PASS
        assert json.loads(capsys.readouterr().out)["status"] == "PASS"

    def test_missing_scenario(self, tmp_path, capsys):
        code = main(["run", "--scenario", str(tmp_path / "nope.txt"), "--out-dir", str(tmp_path)])
        assert code == EXIT_INPUT
        assert "input error" in capsys.readouterr().err

    def test_parse_error_reports_position(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("medium.L = 1e-3\nmedium.X = 2\n")
        assert main(["check", "--scenario", str(path)]) == EXIT_INPUT
        assert ":2:1" in capsys.readouterr().err

    def test_numeric_failure(self, fast, tmp_path):
        path = tmp_path / "s.txt"
        write_scenario(sim_replace(fast, max_steps=10), path)
        assert main(["run", "--scenario", str(path), "--out-dir", str(tmp_path), "--quiet"]) == EXIT_NUMERIC

    def test_verification_failure(self, fast, tmp_path):
        path = tmp_path / "s.txt"
        write_scenario(sim_replace(fast, ode_rel_tol=1e-300, max_halvings=1), path)
        code = main(["run", "--scenario", str(path), "--out-dir", str(tmp_path), "--quiet"])
        assert code == EXIT_VERIFICATION

    def test_sweep_and_check(self, fast, tmp_path, capsys):
        path = tmp_path / "s.txt"
        write_scenario(fast, path)
        assert main(["sweep", "--scenario", str(path), "--out-dir", str(tmp_path),
                     "--param", "q", "--values", "1e-3,2e-3", "--quiet"]) == EXIT_PASS
        assert len(read_table(tmp_path / "sweep.csv")) == 2
        assert main(["check", "--scenario", str(path)]) == EXIT_PASS
        assert "PASS  pressure_profile" in capsys.readouterr().out

    def test_sweep_with_failing_value(self, fast, tmp_path):
        path = tmp_path / "s.txt"
        write_scenario(fast, path)
        code = main(["sweep", "--scenario", str(path), "--out-dir", str(tmp_path),
                     "--param", "theta_E", "--values", "280", "--quiet"])
        assert code == EXIT_NUMERIC

    def test_module_entry_point(self, fast, tmp_path):
        path = tmp_path / "s.txt"
        write_scenario(fast, path)
        proc = subprocess.run(
            [sys.executable, "-m", "vapor_front", "check", "--scenario", str(path), "--quiet"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == EXIT_PASS, proc.stderr
