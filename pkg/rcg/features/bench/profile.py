"""Dolan-More performance profiles.

For problem p and solver s with cost t_{p,s}, r_{p,s} = t_{p,s} / min_s' t_{p,s'}
and P_s(tau) = #{p : r_{p,s} <= tau} / #problems.  Runs that did not
converge get r = inf.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from ...core.error_handler import ContractViolation, ReportError
from .suite import RunRecord


class Metric(str, Enum):
    ITERATIONS = "iterations"
    WALL_TIME = "wall_time"
    COST_EVALS = "cost_evals"
    GRAD_EVALS = "grad_evals"


# keeps ratios finite when the best solver needed zero iterations or ~0 seconds
METRIC_FLOOR = {
    Metric.ITERATIONS: 1.0,
    Metric.WALL_TIME: 1e-6,
    Metric.COST_EVALS: 1.0,
    Metric.GRAD_EVALS: 1.0,
}

PROFILE_FIELDS = ["metric", "solver_id", "tau", "value", "n_problems", "n_solved"]


@dataclass(frozen=True)
class ProfileCurve:
    """Step function P_s: value[i] holds on [tau[i], tau[i+1]), zero before tau[0].

    The last breakpoint is always tau = inf carrying the fraction solved.
    """

    solver_id: str
    metric: Metric
    taus: tuple[float, ...]
    values: tuple[float, ...]
    n_problems: int
    n_solved: int

    def __call__(self, tau: float) -> float:
        value = 0.0
        for t, v in zip(self.taus, self.values):
            if t > tau:
                break
            value = v
        return value

    @property
    def fraction_solved(self) -> float:
        return self.values[-1]


def metric_value(record: RunRecord, metric: Metric) -> float:
    """t_{p,s} for one record; inf unless the run converged."""
    if not record.solved:
        return math.inf
    return max(float(getattr(record, metric.value)), METRIC_FLOOR[metric])


def ratio_table(
    records: Sequence[RunRecord], metric: Metric | str
) -> tuple[list[str], list[str], np.ndarray]:
    """Problems, solvers and the r_{p,s} matrix (rows problems, columns solvers)."""
    metric = Metric(metric)
    if not records:
        raise ContractViolation("cannot build a performance profile from no records")
    problems = sorted({r.problem_id for r in records})
    solvers = sorted({r.solver_id for r in records})
    p_index = {p: i for i, p in enumerate(problems)}
    s_index = {s: j for j, s in enumerate(solvers)}

    t = np.full((len(problems), len(solvers)), np.nan)
    for r in records:
        i, j = p_index[r.problem_id], s_index[r.solver_id]
        if not np.isnan(t[i, j]):
            raise ContractViolation(f"duplicate record for {r.problem_id} / {r.solver_id}")
        t[i, j] = metric_value(r, metric)
    if np.isnan(t).any():
        raise ContractViolation("records do not cover the full problem x solver grid")

    best = t.min(axis=1, keepdims=True)
    with np.errstate(invalid="ignore"):
        ratios = t / best
    # problems nobody solved give inf/inf
    ratios[~np.isfinite(ratios)] = np.inf
    return problems, solvers, ratios


def performance_profile(records: Sequence[RunRecord], metric: Metric | str) -> list[ProfileCurve]:
    metric = Metric(metric)
    problems, solvers, ratios = ratio_table(records, metric)
    n_problems = len(problems)
    curves = []
    for j, solver in enumerate(solvers):
        column = ratios[:, j]
        finite = sorted({float(r) for r in column if np.isfinite(r)})
        taus = [*finite, math.inf]
        values = [
            sum(1 for r in column if np.isfinite(r) and r <= tau) / n_problems for tau in taus
        ]
        curves.append(
            ProfileCurve(
                solver_id=solver,
                metric=metric,
                taus=tuple(taus),
                values=tuple(values),
                n_problems=n_problems,
                n_solved=int(np.isfinite(column).sum()),
            )
        )
    return curves


def write_profile_csv(curves: Iterable[ProfileCurve], path: Path | str) -> Path:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=PROFILE_FIELDS, lineterminator="\n")
            w.writeheader()
            for curve in curves:
                for tau, value in zip(curve.taus, curve.values):
                    w.writerow(
                        {
                            "metric": curve.metric.value,
                            "solver_id": curve.solver_id,
                            "tau": repr(tau),
                            "value": repr(value),
                            "n_problems": curve.n_problems,
                            "n_solved": curve.n_solved,
                        }
                    )
    except OSError as exc:
        raise ReportError(f"cannot write profile: {exc}", path) from exc
    return path


def read_profile_csv(path: Path | str) -> list[ProfileCurve]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ReportError(f"cannot read profile: {exc}", path) from exc

    rows: dict[tuple[str, str], list[dict[str, str]]] = defaultdict(list)
    for row in csv.DictReader(text.splitlines()):
        rows[(row["metric"], row["solver_id"])].append(row)
    curves = []
    for (metric, solver), group in rows.items():
        try:
            curves.append(
                ProfileCurve(
                    solver_id=solver,
                    metric=Metric(metric),
                    taus=tuple(float(r["tau"]) for r in group),
                    values=tuple(float(r["value"]) for r in group),
                    n_problems=int(group[0]["n_problems"]),
                    n_solved=int(group[0]["n_solved"]),
                )
            )
        except (KeyError, ValueError) as exc:
            raise ReportError(f"malformed profile row for {solver}: {exc}", path) from exc
    return curves
