from __future__ import annotations

import json
import math
from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict

from ...core.error_handler import ReportError
from ..manifolds import Manifold, Point, TangentVector


class TerminalStatus(str, Enum):
    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    LINE_SEARCH_FAILED = "LineSearchFailed"


@dataclass(frozen=True)
class CgState:
    """Solver state at iteration k.

    ``transported_eta``/``transported_g`` are the scaled transports of the
    previous direction and gradient (based at ``x``); the ``*_prev`` fields
    describe iteration k-1.  y_{k} is formed on demand as g - transported_g.
    """

    manifold: Manifold
    k: int
    x: Point
    f: float
    g: TangentVector
    eta: TangentVector
    g_norm: float
    dir_deriv: float
    eta_norm: float
    alpha_prev: float = 0.0
    transported_eta: TangentVector | None = None
    transported_g: TangentVector | None = None
    scale_s: float = 1.0
    g_norm_prev: float = math.nan
    dir_deriv_prev: float = math.nan
    eta_norm_prev: float = math.nan
    cost_evals: int = 0
    grad_evals: int = 0
    zoutendijk: float = 0.0


class TraceRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    f: float
    grad_norm: float
    dir_deriv: float
    eta_norm: float
    beta: float | None = None
    alpha: float | None = None
    scale_s: float = 1.0
    fallback: bool = False
    cost_evals: int
    grad_evals: int
    zoutendijk: float

    @property
    def descent_ratio(self) -> float:
        """<g, eta> / ||g||^2."""
        if self.grad_norm == 0.0:
            return math.nan
        return self.dir_deriv / self.grad_norm**2


@dataclass
class Trace:
    records: list[TraceRecord]
    status: TerminalStatus
    x: Point
    rule: str
    linesearch: str
    wall_time: float = 0.0
    cost_evals: int = 0
    grad_evals: int = 0
    message: str = ""

    @property
    def iterations(self) -> int:
        return len(self.records) - 1

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]

    @property
    def converged(self) -> bool:
        return self.status is TerminalStatus.CONVERGED

    def iter_json_lines(self) -> Iterator[str]:
        for record in self.records:
            yield record.model_dump_json()

    def write_jsonl(self, path: Path | str) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", encoding="utf-8") as fh:
                for line in self.iter_json_lines():
                    fh.write(line + "\n")
        except OSError as exc:
            raise ReportError(f"cannot write trace: {exc}", path) from exc
        return path

    def summary(self) -> dict[str, object]:
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "f": self.final.f,
            "grad_norm": self.final.grad_norm,
            "cost_evals": self.cost_evals,
            "grad_evals": self.grad_evals,
            "wall_time": self.wall_time,
        }

    def __str__(self) -> str:
        return json.dumps({"rule": self.rule, "linesearch": self.linesearch, **self.summary()})
