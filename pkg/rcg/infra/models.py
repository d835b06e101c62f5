from __future__ import annotations

from datetime import datetime

from sqlalchemy import DateTime, Float, Integer, String, UniqueConstraint
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    pass


class RunRow(Base):
    """One benchmark run, keyed by (suite, problem, solver)."""

    __tablename__ = "runs"
    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    suite: Mapped[str] = mapped_column(String(64), default="default")
    problem_id: Mapped[str] = mapped_column(String(128))
    problem_kind: Mapped[str] = mapped_column(String(32))
    instance_seed: Mapped[int] = mapped_column(Integer)
    solver_id: Mapped[str] = mapped_column(String(64))
    iterations: Mapped[int] = mapped_column(Integer)
    wall_time: Mapped[float] = mapped_column(Float)
    cost_evals: Mapped[int] = mapped_column(Integer)
    grad_evals: Mapped[int] = mapped_column(Integer)
    final_cost: Mapped[float] = mapped_column(Float)
    final_grad_norm: Mapped[float] = mapped_column(Float)
    status: Mapped[str] = mapped_column(String(32))
    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)
    __table_args__ = (UniqueConstraint("suite", "problem_id", "solver_id"),)
