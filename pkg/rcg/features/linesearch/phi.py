"""One-dimensional restrictions phi(alpha) = f(R_x(alpha * eta)) with evaluation counters."""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable
from typing import Any, Protocol

from ...core.error_handler import RetractionError
from ..manifolds import Manifold, Point, TangentVector

log = logging.getLogger(__name__)


class Objective(Protocol):
    """What a line search or the CG solver needs from a cost function."""

    manifold: Manifold

    def cost(self, x: Point) -> float: ...

    def rgrad(self, x: Point) -> TangentVector: ...


class Phi(ABC):
    """Single-use evaluation context for one line search.

    Values and slopes are cached per step size; ``cost_evals`` and
    ``grad_evals`` count actual objective calls only.
    """

    def __init__(self) -> None:
        self.cost_evals = 0
        self.grad_evals = 0
        self._values: dict[float, float] = {}
        self._slopes: dict[float, float] = {}

    @abstractmethod
    def _value(self, alpha: float) -> float: ...

    @abstractmethod
    def _slope(self, alpha: float) -> float: ...

    def value(self, alpha: float) -> float:
        alpha = float(alpha)
        if alpha not in self._values:
            self._values[alpha] = self._value(alpha)
        return self._values[alpha]

    def derivative(self, alpha: float) -> float:
        alpha = float(alpha)
        if alpha not in self._slopes:
            self._slopes[alpha] = self._slope(alpha)
        return self._slopes[alpha]

    @property
    def phi0(self) -> float:
        return self.value(0.0)

    @property
    def dphi0(self) -> float:
        return self.derivative(0.0)


class LinePhi(Phi):
    """phi given directly by scalar callables (restrictions of Euclidean functions)."""

    def __init__(self, fun: Callable[[float], float], dfun: Callable[[float], float]) -> None:
        super().__init__()
        self._fun = fun
        self._dfun = dfun

    def _value(self, alpha: float) -> float:
        self.cost_evals += 1
        return float(self._fun(alpha))

    def _slope(self, alpha: float) -> float:
        self.grad_evals += 1
        return float(self._dfun(alpha))


class ManifoldPhi(Phi):
    """phi(alpha) = f(R_x(alpha eta)), phi'(alpha) = <grad f(R_x(alpha eta)), T^R_{alpha eta}(eta)>.

    A retraction failure at a trial step makes phi(alpha) = +inf so that the
    trial is rejected by the Armijo test.
    """

    def __init__(
        self,
        objective: Objective,
        x: Point,
        eta: TangentVector,
        f0: float | None = None,
        g0: TangentVector | None = None,
    ) -> None:
        super().__init__()
        self.objective = objective
        self.manifold = objective.manifold
        self.x = x
        self.eta = eta
        self._points: dict[float, Any] = {0.0: x}
        self._grads: dict[float, TangentVector] = {}
        if f0 is not None:
            self._values[0.0] = float(f0)
        if g0 is not None:
            self._grads[0.0] = g0

    def point(self, alpha: float) -> Point | None:
        """R_x(alpha eta), or None when the retraction fails there."""
        alpha = float(alpha)
        if alpha not in self._points:
            try:
                self._points[alpha] = self.manifold.retract(self.x, self.eta * alpha)
            except RetractionError as exc:
                log.debug("Retraction failed at alpha=%.3e: %s", alpha, exc)
                self._points[alpha] = None
        return self._points[alpha]

    def gradient(self, alpha: float) -> TangentVector:
        alpha = float(alpha)
        if alpha not in self._grads:
            y = self.point(alpha)
            if y is None:
                raise RetractionError(f"no point at alpha={alpha:.3e}")
            self.grad_evals += 1
            self._grads[alpha] = self.objective.rgrad(y)
        return self._grads[alpha]

    def _value(self, alpha: float) -> float:
        y = self.point(alpha)
        if y is None:
            return math.inf
        self.cost_evals += 1
        return float(self.objective.cost(y))

    def _slope(self, alpha: float) -> float:
        g = self.gradient(alpha)
        if alpha == 0.0:
            return self.manifold.inner(self.x, g, self.eta)
        y = g.base
        t = self.manifold.transport_diff(self.x, self.eta * alpha, self.eta, at=y)
        return self.manifold.inner(y, g, t)
