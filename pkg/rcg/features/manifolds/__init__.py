from __future__ import annotations

from typing import Any

from ...core.error_handler import ContractViolation
from .base import Manifold, Point, TangentVector, same_point
from .fixed_rank import FixedRank, FixedRankPoint, FixedRankTangent
from .oblique import Oblique
from .sphere import Sphere
from .stiefel import Stiefel

MANIFOLDS: dict[str, type[Manifold]] = {
    Sphere.kind: Sphere,
    Stiefel.kind: Stiefel,
    FixedRank.kind: FixedRank,
    Oblique.kind: Oblique,
}


def manifold_from_spec(spec: dict[str, Any]) -> Manifold:
    params = dict(spec)
    kind = params.pop("kind", None)
    if kind not in MANIFOLDS:
        raise ContractViolation(f"unknown manifold kind: {kind!r}")
    return MANIFOLDS[kind](**params)


__all__ = [
    "FixedRank",
    "FixedRankPoint",
    "FixedRankTangent",
    "MANIFOLDS",
    "Manifold",
    "Oblique",
    "Point",
    "Sphere",
    "Stiefel",
    "TangentVector",
    "manifold_from_spec",
    "same_point",
]
