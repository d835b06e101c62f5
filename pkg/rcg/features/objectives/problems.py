"""The four benchmark cost functions with Euclidean and Riemannian gradients."""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum

import numpy as np

from ...core.error_handler import ContractViolation
from ..manifolds import (
    FixedRank,
    FixedRankPoint,
    Manifold,
    Oblique,
    Point,
    Sphere,
    Stiefel,
    TangentVector,
)

SYMMETRY_TOL = 1e-12


class ProblemKind(str, Enum):
    RAYLEIGH = "rayleigh"
    BROCKETT = "brockett"
    COMPLETION = "completion"
    OFFDIAG = "offdiag"


def _require_symmetric(a: np.ndarray, name: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolation(f"{name} must be square, got shape {a.shape}")
    if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_TOL:
        raise ContractViolation(f"{name} is not symmetric")


def _require_positive_definite(a: np.ndarray, name: str) -> None:
    _require_symmetric(a, name)
    if float(np.linalg.eigvalsh(a)[0]) <= 0.0:
        raise ContractViolation(f"{name} is not positive definite")


def offdiag(b: np.ndarray) -> np.ndarray:
    """``b - ddiag(b)`` for a square matrix or a stack of them."""
    p = b.shape[-1]
    return b * (1.0 - np.eye(p))


class ObjectiveInstance(ABC):
    """A smooth cost on a manifold: cost, Euclidean gradient, Riemannian gradient.

    The Riemannian gradient is the tangent projection of the Euclidean one,
    which is exact for embedded submanifolds with the ambient metric.
    """

    kind: ProblemKind

    def __init__(self, manifold: Manifold, seed: int, instance_id: str | None = None) -> None:
        self.manifold = manifold
        self.seed = int(seed)
        self.id = instance_id or f"{self.kind.value}-s{self.seed}"

    @abstractmethod
    def _cost(self, x: Point) -> float: ...

    @abstractmethod
    def _egrad(self, x: Point) -> np.ndarray: ...

    @abstractmethod
    def data(self) -> dict[str, np.ndarray]:
        """Problem matrices, keyed as in the exported JSON document."""

    def _check_on_manifold(self, x: Point) -> None:
        shape = self.manifold.ambient_shape
        if isinstance(self.manifold, FixedRank):
            ok = isinstance(x, FixedRankPoint) and (
                x.u.shape[0] == shape[0] and x.v.shape[0] == shape[1]
            )
        else:
            ok = isinstance(x, np.ndarray) and x.shape == shape
        if not ok:
            raise ContractViolation(f"point does not belong to {self.manifold} of {self.id}")

    def cost(self, x: Point) -> float:
        self._check_on_manifold(x)
        return float(self._cost(x))

    def egrad(self, x: Point) -> np.ndarray:
        self._check_on_manifold(x)
        return self._egrad(x)

    def rgrad(self, x: Point) -> TangentVector:
        return self.manifold.project(x, self.egrad(x))

    def optimal_value(self) -> float | None:
        """Known global minimum, when a closed form exists."""
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(id={self.id!r}, manifold={self.manifold!r})"


class RayleighQuotient(ObjectiveInstance):
    """f(x) = x^T A x on the unit sphere."""

    kind = ProblemKind.RAYLEIGH

    def __init__(self, a: np.ndarray, seed: int = 0, instance_id: str | None = None) -> None:
        a = np.asarray(a, dtype=float)
        _require_positive_definite(a, "A")
        self.a = a
        super().__init__(Sphere(a.shape[0]), seed, instance_id)

    def _cost(self, x: np.ndarray) -> float:
        return x @ self.a @ x

    def _egrad(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * (self.a @ x)

    def data(self) -> dict[str, np.ndarray]:
        return {"A": self.a}

    def optimal_value(self) -> float:
        return float(np.linalg.eigvalsh(self.a)[0])


class BrockettCost(ObjectiveInstance):
    """f(X) = tr(X^T A X N) on St(p, n), N diagonal."""

    kind = ProblemKind.BROCKETT

    def __init__(
        self, a: np.ndarray, n_matrix: np.ndarray, seed: int = 0, instance_id: str | None = None
    ) -> None:
        a = np.asarray(a, dtype=float)
        n_matrix = np.asarray(n_matrix, dtype=float)
        _require_positive_definite(a, "A")
        weights = np.diag(n_matrix).copy()
        if n_matrix.shape != (weights.size, weights.size) or np.any(n_matrix - np.diag(weights)):
            raise ContractViolation("N must be a square diagonal matrix")
        if np.any(weights < 0) or np.any(np.diff(weights) < 0):
            raise ContractViolation("N must have nondecreasing nonnegative diagonal entries")
        self.a = a
        self.weights = weights
        super().__init__(Stiefel(weights.size, a.shape[0]), seed, instance_id)

    def _cost(self, x: np.ndarray) -> float:
        return float(np.sum((self.a @ x) * x * self.weights))

    def _egrad(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * (self.a @ x) * self.weights

    def data(self) -> dict[str, np.ndarray]:
        return {"A": self.a, "N": np.diag(self.weights)}

    def optimal_value(self) -> float:
        # largest weight pairs with the smallest eigenvalue
        p = self.weights.size
        smallest = np.linalg.eigvalsh(self.a)[:p]
        return float(np.dot(self.weights, smallest[::-1]))


class LowRankCompletion(ObjectiveInstance):
    """f(X) = ||P_Omega(X - A)||_F^2 over rank-k matrices."""

    kind = ProblemKind.COMPLETION

    def __init__(
        self,
        a: np.ndarray,
        mask: np.ndarray,
        rank: int,
        seed: int = 0,
        instance_id: str | None = None,
    ) -> None:
        a = np.asarray(a, dtype=float)
        mask = np.asarray(mask, dtype=bool)
        if a.ndim != 2 or mask.shape != a.shape:
            raise ContractViolation("Omega mask must match the shape of A")
        self.a = a
        self.mask = mask
        super().__init__(FixedRank(a.shape[0], a.shape[1], rank), seed, instance_id)

    def _residual(self, x: FixedRankPoint) -> np.ndarray:
        return np.where(self.mask, self.manifold.to_ambient(x) - self.a, 0.0)

    def _cost(self, x: FixedRankPoint) -> float:
        r = self._residual(x)
        return float(np.vdot(r, r))

    def _egrad(self, x: FixedRankPoint) -> np.ndarray:
        return 2.0 * self._residual(x)

    def data(self) -> dict[str, np.ndarray]:
        return {"A": self.a, "Omega": self.mask}


class OffDiagonalCost(ObjectiveInstance):
    """f(X) = sum_i ||X^T C_i X - ddiag(X^T C_i X)||_F^2 on OB(n, p)."""

    kind = ProblemKind.OFFDIAG

    def __init__(
        self, cs: np.ndarray, p: int, seed: int = 0, instance_id: str | None = None
    ) -> None:
        cs = np.asarray(cs, dtype=float)
        if cs.ndim != 3:
            raise ContractViolation("C must be a stack of square matrices")
        for i, c in enumerate(cs):
            _require_symmetric(c, f"C_{i}")
        self.cs = cs
        super().__init__(Oblique(cs.shape[1], p), seed, instance_id)

    def _blocks(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        cx = self.cs @ x
        return cx, offdiag(x.T @ cx)

    def _cost(self, x: np.ndarray) -> float:
        _, off = self._blocks(x)
        return float(np.sum(off * off))

    def _egrad(self, x: np.ndarray) -> np.ndarray:
        # sum_i 4 C_i X offdiag(X^T C_i X)
        cx, off = self._blocks(x)
        return 4.0 * np.sum(cx @ off, axis=0)

    def data(self) -> dict[str, np.ndarray]:
        return {"C": self.cs}
