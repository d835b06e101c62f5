from __future__ import annotations

from .audit import (
    NO_BOUND,
    AuditReport,
    AuditViolation,
    DescentBounds,
    descent_audit,
    descent_bounds,
)
from .rules import DENOM_GUARD, BetaRule, BetaVariant, XiChoice, beta
from .solver import SolverConfig, initial_state, solve, step
from .state import CgState, TerminalStatus, Trace, TraceRecord

__all__ = [
    "DENOM_GUARD",
    "NO_BOUND",
    "AuditReport",
    "AuditViolation",
    "BetaRule",
    "BetaVariant",
    "CgState",
    "DescentBounds",
    "SolverConfig",
    "TerminalStatus",
    "Trace",
    "TraceRecord",
    "XiChoice",
    "beta",
    "descent_audit",
    "descent_bounds",
    "initial_state",
    "solve",
    "step",
]
