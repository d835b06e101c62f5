from __future__ import annotations

from .config import Interpolation, LineSearchConfig, LineSearchStrategy
from .phi import LinePhi, ManifoldPhi, Objective, Phi
from .searches import (
    Conditions,
    backtracking,
    check_conditions,
    line_search,
    randomized_backtracking,
    strong_wolfe,
    zoom,
)

__all__ = [
    "Conditions",
    "Interpolation",
    "LinePhi",
    "LineSearchConfig",
    "LineSearchStrategy",
    "ManifoldPhi",
    "Objective",
    "Phi",
    "backtracking",
    "check_conditions",
    "line_search",
    "randomized_backtracking",
    "strong_wolfe",
    "zoom",
]
