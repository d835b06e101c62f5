"""JSON export/import of objective instances so benchmark runs are replayable."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ValidationError

from ...core.error_handler import ContractViolation, ReportError
from .problems import (
    BrockettCost,
    LowRankCompletion,
    ObjectiveInstance,
    OffDiagonalCost,
    ProblemKind,
    RayleighQuotient,
)


class InstanceDocument(BaseModel):
    kind: ProblemKind
    id: str
    seed: int
    manifold: dict[str, Any]
    data: dict[str, Any]


def to_document(inst: ObjectiveInstance) -> InstanceDocument:
    data: dict[str, Any] = {}
    for key, value in inst.data().items():
        if value.dtype == bool:
            # Omega as a list of (row, col) index pairs
            data[key] = np.argwhere(value).tolist()
        else:
            data[key] = value.tolist()
    return InstanceDocument(
        kind=inst.kind, id=inst.id, seed=inst.seed, manifold=inst.manifold.spec(), data=data
    )


def from_document(doc: InstanceDocument) -> ObjectiveInstance:
    d = doc.data
    try:
        if doc.kind is ProblemKind.RAYLEIGH:
            return RayleighQuotient(np.array(d["A"]), doc.seed, doc.id)
        if doc.kind is ProblemKind.BROCKETT:
            return BrockettCost(np.array(d["A"]), np.array(d["N"]), doc.seed, doc.id)
        if doc.kind is ProblemKind.COMPLETION:
            a = np.array(d["A"])
            mask = np.zeros(a.shape, dtype=bool)
            idx = np.array(d["Omega"], dtype=int).reshape(-1, 2)
            mask[idx[:, 0], idx[:, 1]] = True
            return LowRankCompletion(a, mask, doc.manifold["k"], doc.seed, doc.id)
        return OffDiagonalCost(np.array(d["C"]), doc.manifold["p"], doc.seed, doc.id)
    except KeyError as exc:
        raise ContractViolation(f"instance document {doc.id} is missing {exc}") from exc


def save_instance(inst: ObjectiveInstance, path: Path | str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(to_document(inst).model_dump_json(), encoding="utf-8")
    except OSError as exc:
        raise ReportError(f"cannot write instance: {exc}", path) from exc
    return path


def load_instance(path: Path | str) -> ObjectiveInstance:
    path = Path(path)
    try:
        doc = InstanceDocument.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ReportError(f"cannot read instance: {exc}", path) from exc
    except ValidationError as exc:
        raise ContractViolation(f"malformed instance document {path}: {exc}") from exc
    return from_document(doc)
