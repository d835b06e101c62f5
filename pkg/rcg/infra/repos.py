from __future__ import annotations

from typing import Iterable, Optional

from sqlalchemy import delete, select
from sqlalchemy.orm import Session

from ..features.bench import RunRecord
from .models import RunRow


class RunsRepo:
    def __init__(self, session: Session) -> None:
        self.s = session

    def add_many(self, records: Iterable[RunRecord], suite: str = "default") -> int:
        """Store ``records`` under ``suite``, replacing earlier rows with the same keys."""
        count = 0
        for record in records:
            self.s.execute(
                delete(RunRow).where(
                    RunRow.suite == suite,
                    RunRow.problem_id == record.problem_id,
                    RunRow.solver_id == record.solver_id,
                )
            )
            self.s.add(RunRow(suite=suite, **record.model_dump(mode="json")))
            count += 1
        return count

    def list_runs(
        self, suite: Optional[str] = None, solver_id: Optional[str] = None
    ) -> list[RunRecord]:
        q = select(RunRow).order_by(RunRow.id)
        if suite is not None:
            q = q.where(RunRow.suite == suite)
        if solver_id is not None:
            q = q.where(RunRow.solver_id == solver_id)
        rows = self.s.execute(q).scalars().all()
        return [_to_record(row) for row in rows]

    def list_suites(self) -> list[str]:
        q = select(RunRow.suite).distinct().order_by(RunRow.suite)
        return list(self.s.execute(q).scalars().all())


def _to_record(row: RunRow) -> RunRecord:
    return RunRecord(
        problem_id=row.problem_id,
        problem_kind=row.problem_kind,
        instance_seed=row.instance_seed,
        solver_id=row.solver_id,
        iterations=row.iterations,
        wall_time=row.wall_time,
        cost_evals=row.cost_evals,
        grad_evals=row.grad_evals,
        final_cost=row.final_cost,
        final_grad_norm=row.final_grad_norm,
        status=row.status,
    )
