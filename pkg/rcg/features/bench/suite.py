"""Solver grid over seeded problem instances."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ...core.error_handler import ContractViolation, ReportError
from ..cg import BetaRule, SolverConfig, TerminalStatus, solve
from ..linesearch import LineSearchConfig, LineSearchStrategy
from ..objectives import ObjectiveInstance, ProblemKind, make_instance
from ..objectives.generators import resolve_sizes

log = logging.getLogger(__name__)

# the seven rules compared in the benchmark, each under both line searches
DEFAULT_RULES = ["FR", "DY", "PRP", "HS", "HZ", "Hybrid1", "Hybrid2"]
DEFAULT_LINESEARCHES = [LineSearchStrategy.BACKTRACKING, LineSearchStrategy.STRONG_WOLFE]
# x0 is drawn from instance_seed + X0_SEED_OFFSET so it differs from the data stream
X0_SEED_OFFSET = 1_000_003

# problem sizes as a hashable, sorted tuple of items
Sizes = tuple[tuple[str, Any], ...]


class RunRecord(BaseModel):
    """Outcome of one (problem instance, solver) run."""

    model_config = ConfigDict(frozen=True)

    problem_id: str
    problem_kind: ProblemKind
    instance_seed: int
    solver_id: str
    iterations: int = Field(ge=0)
    wall_time: float = Field(ge=0.0)
    cost_evals: int = Field(ge=0)
    grad_evals: int = Field(ge=0)
    final_cost: float
    final_grad_norm: float
    status: TerminalStatus

    @property
    def solved(self) -> bool:
        return self.status is TerminalStatus.CONVERGED


def solver_id(rule: str, strategy: LineSearchStrategy | str) -> str:
    return f"{rule}+{LineSearchStrategy(strategy).value}"


def parse_solver_id(value: str) -> tuple[str, LineSearchStrategy]:
    rule, sep, strategy = value.partition("+")
    if not sep:
        raise ContractViolation(f"solver id must look like RULE+LINESEARCH, got {value!r}")
    try:
        return rule, LineSearchStrategy(strategy)
    except ValueError as exc:
        raise ContractViolation(f"unknown line search in solver id {value!r}") from exc


class SuiteConfig(BaseModel):
    """Benchmark grid: problems x repetitions x (beta rule, line search)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    problems: list[ProblemKind] = Field(default_factory=lambda: list(ProblemKind))
    solvers: list[str] = Field(default_factory=lambda: list(DEFAULT_RULES))
    linesearches: list[LineSearchStrategy] = Field(
        default_factory=lambda: list(DEFAULT_LINESEARCHES)
    )
    reps: int = Field(100, ge=1)
    seed: int = 0
    tol: float = Field(1e-6, gt=0.0)
    max_iters: int = Field(5000, ge=0)
    c1: float = 1e-4
    c2: float = 0.9
    mu: float = 2.0
    sizes: dict[ProblemKind, dict[str, Any]] = Field(default_factory=dict)
    workers: int = Field(1, ge=1)

    @field_validator("solvers")
    @classmethod
    def _known_rules(cls, v: list[str]) -> list[str]:
        for label in v:
            BetaRule.parse(label)
        if not v:
            raise ValueError("at least one solver is required")
        return v

    @field_validator("problems", "linesearches")
    @classmethod
    def _non_empty(cls, v: list[Any]) -> list[Any]:
        if not v:
            raise ValueError("must not be empty")
        return v

    @classmethod
    def from_json(
        cls, path: Path | str, defaults: dict[str, Any] | None = None, **overrides: Any
    ) -> SuiteConfig:
        """Load a JSON config over ``defaults``; non-None ``overrides`` (CLI flags) win."""
        data = read_config_file(path)
        return cls.model_validate({**(defaults or {}), **data, **_present(overrides)})

    def with_overrides(self, **overrides: Any) -> SuiteConfig:
        return self.model_validate({**self.model_dump(), **_present(overrides)})

    def line_search_config(self, strategy: LineSearchStrategy) -> LineSearchConfig:
        return LineSearchConfig(strategy=strategy, c1=self.c1, c2=self.c2)

    def solver_configs(self) -> dict[str, SolverConfig]:
        configs = {}
        for strategy in self.linesearches:
            ls = self.line_search_config(strategy)
            for label in self.solvers:
                cfg = SolverConfig(
                    beta_rule=BetaRule.parse(label, mu=self.mu),
                    linesearch=ls,
                    tol=self.tol,
                    max_iters=self.max_iters,
                )
                configs[cfg.solver_id] = cfg
        return configs

    def instance_seeds(self) -> list[int]:
        return [self.seed + rep for rep in range(self.reps)]


def read_config_file(path: Path | str) -> dict[str, Any]:
    """Read a JSON object of command options."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ReportError(f"cannot read config: {exc}", path) from exc
    except json.JSONDecodeError as exc:
        raise ContractViolation(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ContractViolation(f"config {path} must be a JSON object")
    return data


def _present(overrides: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in overrides.items() if v is not None}


@lru_cache(maxsize=8)
def _instance(kind: ProblemKind, seed: int, sizes: Sizes) -> ObjectiveInstance:
    return make_instance(kind, seed, **dict(sizes))


def run_one(
    kind: ProblemKind, seed: int, sizes: Sizes, cfg: SolverConfig
) -> RunRecord:
    """Solve one instance with one solver; every solver sees the same x0."""
    inst = _instance(kind, seed, sizes)
    x0 = inst.manifold.random_point(seed + X0_SEED_OFFSET)
    if cfg.linesearch.strategy is LineSearchStrategy.RANDOM_ARMIJO:
        cfg = cfg.model_copy(update={"seed": seed})
    trace = solve(inst, x0, cfg)
    return RunRecord(
        problem_id=inst.id,
        problem_kind=kind,
        instance_seed=seed,
        solver_id=cfg.solver_id,
        iterations=trace.iterations,
        wall_time=trace.wall_time,
        cost_evals=trace.cost_evals,
        grad_evals=trace.grad_evals,
        final_cost=trace.final.f,
        final_grad_norm=trace.final.grad_norm,
        status=trace.status,
    )


def _run_task(task: tuple[ProblemKind, int, Sizes, SolverConfig]) -> RunRecord:
    return run_one(*task)


def run_suite(cfg: SuiteConfig) -> list[RunRecord]:
    """Run the full grid; failed runs are kept as records."""
    solvers = cfg.solver_configs()
    tasks = []
    for kind in cfg.problems:
        frozen = tuple(sorted(resolve_sizes(kind, cfg.sizes.get(kind)).items()))
        for seed in cfg.instance_seeds():
            for solver_cfg in solvers.values():
                tasks.append((kind, seed, frozen, solver_cfg))

    log.info(
        "Running %d runs (%d problems x %d reps x %d solvers) on %d worker(s)",
        len(tasks),
        len(cfg.problems),
        cfg.reps,
        len(solvers),
        cfg.workers,
    )
    records: list[RunRecord] = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for record in pool.map(_run_task, tasks, chunksize=max(1, len(solvers))):
                _log_record(record)
                records.append(record)
    else:
        for task in tasks:
            record = _run_task(task)
            _log_record(record)
            records.append(record)

    solved = sum(r.solved for r in records)
    log.info("Suite finished: %d/%d runs converged", solved, len(records))
    return records


def _log_record(record: RunRecord) -> None:
    log.debug(
        "%s %s: %s in %d iterations (%.3fs)",
        record.problem_id,
        record.solver_id,
        record.status.value,
        record.iterations,
        record.wall_time,
        extra={"event": "bench_run", "solver_id": record.solver_id},
    )
