from __future__ import annotations

from .generators import DEFAULT_SIZES, make_instance, random_spd
from .documents import InstanceDocument, from_document, load_instance, save_instance, to_document
from .problems import (
    BrockettCost,
    LowRankCompletion,
    ObjectiveInstance,
    OffDiagonalCost,
    ProblemKind,
    RayleighQuotient,
)

__all__ = [
    "DEFAULT_SIZES",
    "BrockettCost",
    "InstanceDocument",
    "LowRankCompletion",
    "ObjectiveInstance",
    "OffDiagonalCost",
    "ProblemKind",
    "RayleighQuotient",
    "from_document",
    "load_instance",
    "make_instance",
    "random_spd",
    "save_instance",
    "to_document",
]
