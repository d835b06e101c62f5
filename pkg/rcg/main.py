from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from .core.config import settings
from .core.error_handler import EXIT_OK, ContractViolation, ErrorHandler
from .core.logging_config import get_logger, setup_logging
from .features.bench import (
    Metric,
    RunRecord,
    SuiteConfig,
    emit_profiles,
    emit_report,
    performance_profile,
    read_config_file,
    read_records,
    run_suite,
    write_records,
)
from .features.cg import BetaRule, SolverConfig, descent_audit, solve
from .features.linesearch import LineSearchConfig, LineSearchStrategy
from .features.objectives import load_instance, make_instance, save_instance

log = get_logger(__name__)

DEFAULT_REPORT_METRICS = [Metric.ITERATIONS, Metric.WALL_TIME, Metric.COST_EVALS]
# config-file keys spelled differently from their option dest
CONFIG_ALIASES = {"in": "source"}
LIST_OPTIONS = {"solvers", "metrics"}


def _csv_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcg", description="Riemannian conjugate-gradient solvers and benchmarks"
    )
    parser.add_argument("--debug", action="store_true", default=None, help="DEBUG logging")
    parser.add_argument("--log-file", action="store_true", default=None, help="also log to logs/")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the benchmark grid and write run records")
    run.add_argument("--config", type=Path, help="JSON suite config; flags override it")
    run.add_argument("--problems", type=_csv_list, help="comma list of problem kinds")
    run.add_argument("--solvers", type=_csv_list, help="comma list of beta rules (FR,HZ,...)")
    run.add_argument("--linesearch", type=_csv_list, help="comma list of line searches")
    run.add_argument("--reps", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--tol", type=float)
    run.add_argument("--max-iters", type=int)
    run.add_argument("--c1", type=float)
    run.add_argument("--c2", type=float)
    run.add_argument("--mu", type=float)
    run.add_argument("--workers", type=int)
    run.add_argument("--out", type=Path, help="output directory")
    run.add_argument("--db", help="SQLAlchemy URL of the run store")
    run.add_argument("--suite", default="default", help="run store key for these records")

    profile = sub.add_parser("profile", help="performance profile for one metric")
    profile.add_argument("--config", type=Path, help="JSON of these options; flags override it")
    profile.add_argument("--metric", choices=[m.value for m in Metric])
    profile.add_argument("--in", dest="source", help="records file/dir or DB URL")
    profile.add_argument("--out", type=Path)
    profile.add_argument("--solvers", type=_csv_list, help="restrict to these solver ids")
    profile.add_argument("--suite")

    report = sub.add_parser("report", help="records plus profiles for every metric")
    report.add_argument("--config", type=Path, help="JSON of these options; flags override it")
    report.add_argument("--in", dest="source", help="records file/dir or DB URL")
    report.add_argument("--out", type=Path)
    report.add_argument("--metrics", type=_csv_list, help="comma list of metrics")
    report.add_argument("--solvers", type=_csv_list, help="restrict to these solver ids")
    report.add_argument("--suite")

    solve_p = sub.add_parser("solve", help="solve one instance and audit its trace")
    solve_p.add_argument("--problem", default="rayleigh")
    solve_p.add_argument("--instance", type=Path, help="instance JSON instead of --problem")
    solve_p.add_argument("--seed", type=int, default=0)
    solve_p.add_argument("--rule", default="HZ")
    solve_p.add_argument("--linesearch", default=LineSearchStrategy.STRONG_WOLFE.value)
    solve_p.add_argument("--tol", type=float, default=1e-6)
    solve_p.add_argument("--max-iters", type=int, default=5000)
    solve_p.add_argument("--c1", type=float, default=1e-4)
    solve_p.add_argument("--c2", type=float, default=0.9)
    solve_p.add_argument("--mu", type=float, default=2.0)
    solve_p.add_argument("--trace", type=Path, help="write the trace as JSON lines")

    export = sub.add_parser("export-instance", help="write a seeded instance as JSON")
    export.add_argument("--problem", required=True)
    export.add_argument("--seed", type=int, default=0)
    export.add_argument("--out", type=Path, required=True)
    return parser


def _is_db_url(source: str) -> bool:
    return "://" in source


def _load_records(source: str, suite: str) -> list[RunRecord]:
    if _is_db_url(source):
        from .infra import db
        from .infra.migrate import open_store
        from .infra.repos import RunsRepo

        open_store(source)
        with db.SessionLocal() as s:  # type: ignore
            records = RunsRepo(s).list_runs(suite=suite)
        if not records:
            raise ContractViolation(f"run store has no records for suite {suite!r}")
        return records
    return read_records(source)


def _store_records(dsn: str, records: list[RunRecord], suite: str) -> None:
    from .infra import db
    from .infra.migrate import open_store
    from .infra.repos import RunsRepo

    open_store(dsn)
    with db.SessionLocal() as s:  # type: ignore
        count = RunsRepo(s).add_many(records, suite=suite)
        s.commit()
    log.info("Stored %d records in %s (suite %s)", count, dsn, suite)


def _select(records: list[RunRecord], solvers: Sequence[str] | None) -> list[RunRecord]:
    if not solvers:
        return records
    known = {r.solver_id for r in records}
    missing = [s for s in solvers if s not in known]
    if missing:
        raise ContractViolation(f"no records for solver(s): {', '.join(missing)}")
    return [r for r in records if r.solver_id in solvers]


def cmd_run(args: argparse.Namespace) -> int:
    overrides: dict[str, Any] = {
        "problems": args.problems,
        "solvers": args.solvers,
        "linesearches": args.linesearch,
        "reps": args.reps,
        "seed": args.seed,
        "tol": args.tol,
        "max_iters": args.max_iters,
        "c1": args.c1,
        "c2": args.c2,
        "mu": args.mu,
        "workers": args.workers,
    }
    if args.config is not None:
        cfg = SuiteConfig.from_json(
            args.config, defaults={"workers": settings.RCG_WORKERS}, **overrides
        )
    else:
        cfg = SuiteConfig(workers=settings.RCG_WORKERS).with_overrides(**overrides)

    records = run_suite(cfg)
    out = args.out or Path(settings.RCG_OUTPUT_DIR)
    write_records(records, out)
    dsn = args.db or settings.RCG_DATABASE_URL
    if dsn:
        _store_records(dsn, records, args.suite)
    return EXIT_OK


def _merge_config(args: argparse.Namespace, defaults: dict[str, Any]) -> None:
    """Fill options absent on the command line from ``--config``, then from ``defaults``."""
    data: dict[str, Any] = {}
    if args.config is not None:
        raw = read_config_file(args.config)
        data = {CONFIG_ALIASES.get(k, k).replace("-", "_"): v for k, v in raw.items()}
        allowed = set(vars(args)) - {"command", "config", "debug", "log_file"}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ContractViolation(f"unknown option(s) in {args.config}: {', '.join(unknown)}")
    for key, value in {**defaults, **data}.items():
        if getattr(args, key) is not None:
            continue
        if key in LIST_OPTIONS and isinstance(value, str):
            value = _csv_list(value)
        elif key == "out" and value is not None:
            value = Path(value)
        setattr(args, key, value)
    if args.source is None:
        raise ContractViolation('no records source: pass --in or set "in" in the config file')


def _metrics(names: Sequence[str]) -> list[Metric]:
    try:
        return [Metric(m) for m in names]
    except ValueError as exc:
        raise ContractViolation(str(exc)) from exc


def cmd_profile(args: argparse.Namespace) -> int:
    _merge_config(args, {"metric": Metric.ITERATIONS.value, "suite": "default"})
    (metric,) = _metrics([args.metric])
    records = _select(_load_records(args.source, args.suite), args.solvers)
    curves = performance_profile(records, metric)
    for curve in curves:
        log.info("%s: fraction solved %.3f", curve.solver_id, curve.fraction_solved)
    emit_profiles(curves, args.out or Path(settings.RCG_OUTPUT_DIR))
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    _merge_config(args, {"suite": "default"})
    metrics = _metrics(args.metrics) if args.metrics else DEFAULT_REPORT_METRICS
    records = _select(_load_records(args.source, args.suite), args.solvers)
    curves = [c for m in metrics for c in performance_profile(records, m)]
    emit_report(curves, records, args.out or Path(settings.RCG_OUTPUT_DIR))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance) if args.instance else make_instance(args.problem, args.seed)
    cfg = SolverConfig(
        beta_rule=BetaRule.parse(args.rule, mu=args.mu),
        linesearch=LineSearchConfig(strategy=args.linesearch, c1=args.c1, c2=args.c2),
        tol=args.tol,
        max_iters=args.max_iters,
        seed=args.seed,
    )
    x0 = inst.manifold.random_point(args.seed)
    trace = solve(inst, x0, cfg)
    if args.trace is not None:
        trace.write_jsonl(args.trace)
    audit = descent_audit(trace, cfg.beta_rule, cfg)
    summary = {"problem": inst.id, "solver": cfg.solver_id, **trace.summary()}
    optimum = inst.optimal_value()
    if optimum is not None:
        summary["optimal_value"] = optimum
    print(json.dumps(summary))
    log.info("Descent audit: %s", audit.message)
    for v in audit.violations[:10]:
        log.warning("k=%d ratio %.6f outside bound %.6f by %.3e", v.k, v.ratio, v.bound, v.slack)
    return EXIT_OK


def cmd_export_instance(args: argparse.Namespace) -> int:
    path = save_instance(make_instance(args.problem, args.seed), args.out)
    log.info("Wrote instance to %s", path)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "profile": cmd_profile,
    "report": cmd_report,
    "solve": cmd_solve,
    "export-instance": cmd_export_instance,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    debug = settings.RCG_DEBUG if args.debug is None else args.debug
    log_file = settings.RCG_LOG_FILE if args.log_file is None else args.log_file
    setup_logging(log_file=log_file, debug=debug)
    logging.captureWarnings(True)

    try:
        return COMMANDS[args.command](args)
    except Exception as exc:
        return ErrorHandler.handle_cli_error(exc, debug=debug)


if __name__ == "__main__":
    sys.exit(main())
