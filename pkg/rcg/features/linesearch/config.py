from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class LineSearchStrategy(str, Enum):
    BACKTRACKING = "backtracking"
    STRONG_WOLFE = "strong_wolfe"
    # backtracking from a random initial trial; used to exercise step-size independence
    RANDOM_ARMIJO = "random_armijo"


class Interpolation(str, Enum):
    BISECTION = "bisection"
    QUADRATIC = "quadratic"


class LineSearchConfig(BaseModel):
    """Step-size selection parameters.

    ``alpha_hi`` is the first trial of the backtracking search.  The
    bracketing search starts at ``alpha0`` and grows trials by ``expansion``
    up to ``alpha_max``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    strategy: LineSearchStrategy = LineSearchStrategy.STRONG_WOLFE
    c1: float = Field(1e-4, gt=0.0, lt=1.0)
    c2: float = Field(0.9, gt=0.0, lt=1.0)
    rho: float = Field(0.5, gt=0.0, lt=1.0)
    alpha_hi: float = Field(1.0, gt=0.0)
    alpha0: float = Field(1.0, gt=0.0)
    alpha_max: float = Field(50.0, gt=0.0)
    expansion: float = Field(2.0, gt=1.0)
    max_iters: int = Field(60, ge=1)
    zoom_max_iters: int = Field(30, ge=1)
    interpolation: Interpolation = Interpolation.BISECTION

    @model_validator(mode="after")
    def _check_ordering(self) -> LineSearchConfig:
        if not self.c1 < self.c2:
            raise ValueError(f"need 0 < c1 < c2 < 1, got c1={self.c1}, c2={self.c2}")
        if self.alpha0 > self.alpha_max:
            raise ValueError("alpha0 must not exceed alpha_max")
        return self
