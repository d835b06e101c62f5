"""The beta_{k+1} formulas coupling successive search directions."""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from ...core.error_handler import ContractViolation
from ..manifolds import Point, TangentVector
from .state import CgState

# relative threshold below which HS/DY/HZ denominators count as zero
DENOM_GUARD = 1e-14


class BetaVariant(str, Enum):
    FR = "FR"
    PRP = "PRP"
    HS = "HS"
    DY = "DY"
    HYBRID1 = "Hybrid1"
    HYBRID2 = "Hybrid2"
    HZ = "HZ"
    SD = "SD"


class XiChoice(str, Enum):
    # xi = y / (<g_{k+1}, T(eta_k)> - <g_k, eta_k>), which reproduces HZ
    HZ_QUOTIENT = "hz_quotient"
    # xi = y / ||g_k||^2, the PRP analogue
    GRADIENT_DIFFERENCE = "gradient_difference"


class BetaRule(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: BetaVariant = BetaVariant.HZ
    mu: float = Field(2.0, gt=0.25)
    xi_choice: XiChoice = XiChoice.HZ_QUOTIENT

    @property
    def label(self) -> str:
        if self.variant is BetaVariant.SD and self.xi_choice is XiChoice.GRADIENT_DIFFERENCE:
            return "SD-gd"
        return self.variant.value

    @classmethod
    def parse(cls, label: str, mu: float = 2.0) -> BetaRule:
        """Build a rule from its label ("FR", "HZ", "SD", "SD-gd", ...)."""
        if label == "SD-gd":
            return cls(variant=BetaVariant.SD, mu=mu, xi_choice=XiChoice.GRADIENT_DIFFERENCE)
        lookup = {v.value.lower(): v for v in BetaVariant}
        try:
            variant = lookup[label.lower()]
        except KeyError as exc:
            raise ContractViolation(f"unknown beta rule: {label!r}") from exc
        return cls(variant=variant, mu=mu)


def beta(rule: BetaRule, state: CgState, g_new: TangentVector, x_new: Point) -> float:
    """beta_{k+1} for ``rule``.

    ``state`` carries iteration-k data with ``transported_eta`` and
    ``transported_g`` already moved to ``x_new`` by the scaled transport.
    Degenerate denominators give beta = 0.
    """
    if state.transported_eta is None or state.transported_g is None:
        raise ContractViolation("beta needs the transported direction and gradient")
    M = state.manifold
    t_eta = state.transported_eta
    gg = M.inner(x_new, g_new, g_new)
    g_teta = M.inner(x_new, g_new, t_eta)
    y = g_new - state.transported_g
    g_y = M.inner(x_new, g_new, y)
    gk2 = state.g_norm_prev**2

    denom = g_teta - state.dir_deriv_prev
    degenerate = abs(denom) < DENOM_GUARD * max(1.0, math.sqrt(gg) * state.eta_norm_prev)

    fr = gg / gk2 if gk2 > 0.0 else 0.0
    prp = g_y / gk2 if gk2 > 0.0 else 0.0
    hs = 0.0 if degenerate else g_y / denom
    dy = 0.0 if degenerate else gg / denom

    variant = rule.variant
    if variant is BetaVariant.FR:
        return fr
    if variant is BetaVariant.PRP:
        return prp
    if variant is BetaVariant.HS:
        return hs
    if variant is BetaVariant.DY:
        return dy
    if variant is BetaVariant.HYBRID1:
        return max(0.0, min(hs, dy))
    if variant is BetaVariant.HYBRID2:
        return max(0.0, min(fr, prp))
    if variant is BetaVariant.HZ:
        if degenerate:
            return 0.0
        yy = M.inner(x_new, y, y)
        return hs - rule.mu * yy * g_teta / denom**2

    # SD: <g, xi> - mu ||xi||^2 <g, T(eta)>
    if rule.xi_choice is XiChoice.HZ_QUOTIENT:
        if degenerate:
            return 0.0
        xi = y / denom
    else:
        if gk2 <= 0.0:
            return 0.0
        xi = y / gk2
    return M.inner(x_new, g_new, xi) - rule.mu * M.inner(x_new, xi, xi) * g_teta
