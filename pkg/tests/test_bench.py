from __future__ import annotations

import json
import math

import numpy as np
import pytest
from oracles import brute_force_profile, record
from pydantic import ValidationError

from rcg.core.error_handler import ContractViolation, ReportError
from rcg.features.bench import (
    Metric,
    SuiteConfig,
    emit_report,
    parse_solver_id,
    performance_profile,
    ratio_table,
    read_profile_csv,
    read_records,
    run_suite,
    solver_id,
    write_profile_csv,
    write_records,
)
from rcg.features.cg import TerminalStatus
from rcg.features.linesearch import LineSearchStrategy

TINY = SuiteConfig(
    problems=["rayleigh"],
    solvers=["FR", "HZ", "Hybrid2"],
    linesearches=["backtracking"],
    reps=2,
    seed=5,
    max_iters=400,
    sizes={"rayleigh": {"n": 10}},
)


def curve_for(curves, solver):
    return next(c for c in curves if c.solver_id == solver)


# -- suite --------------------------------------------------------------------


def test_solver_ids():
    assert solver_id("HZ", "strong_wolfe") == "HZ+strong_wolfe"
    assert parse_solver_id("FR+backtracking") == ("FR", LineSearchStrategy.BACKTRACKING)
    with pytest.raises(ContractViolation):
        parse_solver_id("FR")
    with pytest.raises(ContractViolation):
        parse_solver_id("FR+golden")


def test_suite_config_validation():
    with pytest.raises(ValidationError):
        SuiteConfig(solvers=["CG_DESCENT"])
    with pytest.raises(ValidationError):
        SuiteConfig(problems=[])
    with pytest.raises(ValidationError):
        SuiteConfig(reps=0)
    assert len(SuiteConfig().solver_configs()) == 14


def test_suite_config_file_and_flags(tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"reps": 3, "c2": 0.4, "sizes": {"rayleigh": {"n": 12}}}))
    cfg = SuiteConfig.from_json(path, reps=7, c2=None)
    assert cfg.reps == 7
    assert cfg.c2 == 0.4
    assert cfg.sizes == {"rayleigh": {"n": 12}}
    assert cfg.instance_seeds() == list(range(7))
    # the file wins over defaults, flags win over both
    based = SuiteConfig.from_json(path, defaults={"workers": 3, "reps": 9}, workers=None)
    assert (based.workers, based.reps) == (3, 3)
    assert SuiteConfig.from_json(path, defaults={"workers": 3}, workers=2).workers == 2

    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(ContractViolation):
        SuiteConfig.from_json(bad)
    with pytest.raises(ReportError):
        SuiteConfig.from_json(tmp_path / "missing.json")


def test_run_suite_grid():
    records = run_suite(TINY)
    assert len(records) == 1 * 2 * 3
    assert {r.problem_id for r in records} == {"rayleigh-s5", "rayleigh-s6"}
    assert {r.solver_id for r in records} == {
        "FR+backtracking",
        "HZ+backtracking",
        "Hybrid2+backtracking",
    }
    for r in records:
        assert isinstance(r.status, TerminalStatus)
        assert r.cost_evals >= 1


def test_run_suite_is_deterministic():
    first = run_suite(TINY)
    second = run_suite(TINY)
    strip = ("wall_time",)
    assert [r.model_dump(exclude=set(strip)) for r in first] == [
        r.model_dump(exclude=set(strip)) for r in second
    ]


def test_failed_runs_are_kept():
    cfg = TINY.with_overrides(max_iters=1, tol=1e-12)
    records = run_suite(cfg)
    assert len(records) == 6
    assert all(r.status is not TerminalStatus.CONVERGED for r in records)
    curves = performance_profile(records, Metric.ITERATIONS)
    assert all(c.fraction_solved == 0.0 for c in curves)


# -- profiles -----------------------------------------------------------------


def test_profile_two_solvers_example():
    records = [
        record("p1", "A", 10),
        record("p1", "B", 20),
        record("p2", "A", 30),
        record("p2", "B", 15),
    ]
    curves = performance_profile(records, "iterations")
    a, b = curve_for(curves, "A"), curve_for(curves, "B")
    assert a(1.0) == 0.5 and b(1.0) == 0.5
    assert a(1.99) == 0.5
    assert a(2.0) == 1.0 and b(2.0) == 1.0
    assert a(0.5) == 0.0
    assert a.taus[-1] == math.inf


def test_profile_failure_never_counts():
    records = [
        record("p1", "A", 10),
        record("p1", "B", 5, solved=False),
        record("p2", "A", 7),
        record("p2", "B", 7),
    ]
    curves = performance_profile(records, "iterations")
    b = curve_for(curves, "B")
    assert b(1e9) == 0.5
    assert b.fraction_solved == 0.5
    assert b.n_solved == 1
    assert curve_for(curves, "A")(1.0) == 1.0


def test_zero_iterations_floor():
    records = [record("p1", "A", 0), record("p1", "B", 3)]
    _, solvers, ratios = ratio_table(records, Metric.ITERATIONS)
    assert solvers == ["A", "B"]
    np.testing.assert_array_equal(ratios, [[1.0, 3.0]])


def test_unsolved_problem_is_inf_everywhere():
    records = [record("p1", "A", 3, solved=False), record("p1", "B", 3, solved=False)]
    _, _, ratios = ratio_table(records, "cost_evals")
    assert np.isinf(ratios).all()


def test_profile_matches_brute_force():
    rng = np.random.default_rng(0)
    for trial in range(20):
        n_problems = int(rng.integers(1, 6))
        solvers = ["A", "B", "C"]
        records = [
            record(f"p{p}", s, int(rng.integers(0, 50)), solved=bool(rng.random() > 0.2))
            for p in range(n_problems)
            for s in solvers
        ]
        curves = performance_profile(records, Metric.ITERATIONS)
        for curve in curves:
            values = [curve(tau) for tau in (1.0, 1.5, 2.0, 4.0, 50.0, math.inf)]
            assert values == sorted(values), trial
            for tau in [*curve.taus, 1.0, 3.3, 100.0]:
                assert curve(tau) == brute_force_profile(records, curve.solver_id, tau)


def test_profile_needs_complete_grid():
    with pytest.raises(ContractViolation):
        performance_profile([], "iterations")
    with pytest.raises(ContractViolation):
        performance_profile([record("p1", "A", 1), record("p2", "B", 1)], "iterations")
    with pytest.raises(ContractViolation):
        performance_profile([record("p1", "A", 1), record("p1", "A", 2)], "iterations")
    with pytest.raises(ValueError):
        performance_profile([record("p1", "A", 1)], "flops")


def test_profile_csv_round_trip(tmp_path):
    records = [
        record("p1", "A", 10),
        record("p1", "B", 13),
        record("p2", "A", 4),
        record("p2", "B", 3, solved=False),
    ]
    curves = performance_profile(records, Metric.COST_EVALS)
    loaded = read_profile_csv(write_profile_csv(curves, tmp_path / "p.csv"))
    assert sorted(loaded, key=lambda c: c.solver_id) == sorted(curves, key=lambda c: c.solver_id)
    with pytest.raises(ReportError):
        read_profile_csv(tmp_path / "missing.csv")


# -- artifacts ----------------------------------------------------------------


def test_records_round_trip(tmp_path):
    records = [record("p1", "A", 10), record("p1", "B", 3, solved=False)]
    jsonl, csv_path = write_records(records, tmp_path / "out")
    assert read_records(jsonl) == records
    assert read_records(csv_path) == records
    assert read_records(tmp_path / "out") == records


def test_read_records_errors(tmp_path):
    with pytest.raises(ReportError):
        read_records(tmp_path / "nothing.jsonl")
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"problem_id": "p1"}\n')
    with pytest.raises(ReportError):
        read_records(bad)


def test_emit_report_files(tmp_path):
    records = [record("p1", "A+backtracking", 4), record("p1", "B+backtracking", 8)]
    curves = [
        *performance_profile(records, Metric.ITERATIONS),
        *performance_profile(records, Metric.WALL_TIME),
    ]
    paths = emit_report(curves, records, tmp_path)
    names = sorted(p.name for p in paths)
    assert names == [
        "profile_iterations.csv",
        "profile_iterations.svg",
        "profile_wall_time.csv",
        "profile_wall_time.svg",
        "records.csv",
        "records.jsonl",
    ]
    svg = (tmp_path / "profile_iterations.svg").read_text(encoding="utf-8")
    for solver in ("A+backtracking", "B+backtracking"):
        assert svg.count(f'id="{solver}"') == 1


def test_emit_report_without_curves_writes_nothing(tmp_path):
    out = tmp_path / "report"
    with pytest.raises(ReportError):
        emit_report([], [record("p1", "A", 1)], out)
    assert not out.exists()
