"""Per-iteration check of the sufficient descent bounds a beta rule guarantees.

For each rule and line-search pairing with a known guarantee, the ratio
<g_k, eta_k> / ||g_k||^2 must stay inside a fixed interval.  Iterations where
the solver fell back to steepest descent are excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..linesearch import LineSearchStrategy
from .rules import BetaRule, BetaVariant
from .solver import SolverConfig
from .state import Trace

NO_BOUND = "no applicable bound"


@dataclass(frozen=True)
class DescentBounds:
    lower: float
    upper: float
    source: str

    @property
    def kappa(self) -> float:
        """Sufficient descent constant: <g, eta> <= -kappa ||g||^2."""
        return -self.upper


@dataclass(frozen=True)
class AuditViolation:
    k: int
    ratio: float
    bound: float
    slack: float


@dataclass
class AuditReport:
    rule: str
    linesearch: str
    bounds: DescentBounds | None
    checked: int = 0
    excluded: int = 0
    violations: list[AuditViolation] = field(default_factory=list)

    @property
    def applicable(self) -> bool:
        return self.bounds is not None

    @property
    def ok(self) -> bool:
        return self.applicable and not self.violations

    @property
    def message(self) -> str:
        if self.bounds is None:
            return f"{self.rule}+{self.linesearch}: {NO_BOUND}"
        verdict = "ok" if not self.violations else f"{len(self.violations)} violations"
        return (
            f"{self.rule}+{self.linesearch}: ratio in [{self.bounds.lower:.4f}, "
            f"{self.bounds.upper:.4f}] ({self.bounds.source}); {self.checked} checked, "
            f"{self.excluded} excluded, {verdict}"
        )


def descent_bounds(rule: BetaRule, cfg: SolverConfig) -> DescentBounds | None:
    """Interval for <g, eta>/||g||^2 guaranteed by ``rule`` under ``cfg``, if any."""
    c2 = cfg.linesearch.c2
    strong = cfg.linesearch.strategy is LineSearchStrategy.STRONG_WOLFE
    variant = rule.variant

    if variant in (BetaVariant.HZ, BetaVariant.SD):
        return DescentBounds(-math.inf, -(1.0 - 1.0 / (4.0 * rule.mu)), "any step size")
    if not strong:
        return None
    if variant in (BetaVariant.FR, BetaVariant.HYBRID2):
        if c2 >= 0.5:
            return None
        return DescentBounds(
            -1.0 / (1.0 - c2), -(1.0 - 2.0 * c2) / (1.0 - c2), "strong Wolfe, c2 < 1/2"
        )
    if variant is BetaVariant.DY:
        # the strong Wolfe step also satisfies the plain Wolfe conditions
        return DescentBounds(-1.0 / (1.0 - c2), -1.0 / (1.0 + c2), "Wolfe")
    if variant is BetaVariant.HYBRID1:
        return DescentBounds(-(1.0 + c2) / (1.0 - c2), -(1.0 - c2) / (1.0 + c2), "strong Wolfe")
    return None


def descent_audit(
    trace: Trace, rule: BetaRule, cfg: SolverConfig, tol: float = 1e-8
) -> AuditReport:
    """Check every recorded iteration against :func:`descent_bounds`.

    A ratio outside the interval by more than ``tol`` is a violation;
    ``slack`` is the signed distance past the violated endpoint.
    """
    bounds = descent_bounds(rule, cfg)
    report = AuditReport(rule=rule.label, linesearch=cfg.linesearch.strategy.value, bounds=bounds)
    if bounds is None:
        return report

    for record in trace.records:
        if record.fallback or record.grad_norm == 0.0:
            report.excluded += 1
            continue
        report.checked += 1
        ratio = record.descent_ratio
        if ratio > bounds.upper + tol:
            report.violations.append(
                AuditViolation(record.k, ratio, bounds.upper, ratio - bounds.upper)
            )
        elif ratio < bounds.lower - tol:
            report.violations.append(
                AuditViolation(record.k, ratio, bounds.lower, bounds.lower - ratio)
            )
    return report
