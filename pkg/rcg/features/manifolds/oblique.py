from __future__ import annotations

from typing import Any

import numpy as np

from ...core.error_handler import ContractViolation
from .base import POINT_TOL, Manifold, normalize_columns


class Oblique(Manifold):
    """Oblique manifold OB(n, p): n-by-p matrices with unit-norm columns.

    A product of p spheres in R^n; every operation acts column by column.
    """

    kind = "oblique"

    def __init__(self, n: int, p: int) -> None:
        if int(n) < 1 or int(p) < 1:
            raise ContractViolation(f"Oblique requires n >= 1 and p >= 1, got n={n}, p={p}")
        self.n = int(n)
        self.p = int(p)

    @property
    def dim(self) -> int:
        return (self.n - 1) * self.p

    @property
    def ambient_shape(self) -> tuple[int, ...]:
        return (self.n, self.p)

    def spec(self) -> dict[str, Any]:
        return {"kind": self.kind, "n": self.n, "p": self.p}

    def _project(self, x: np.ndarray, a: np.ndarray) -> np.ndarray:
        # a - X ddiag(X^T a)
        return a - x * np.sum(x * a, axis=0)

    def _retract(self, x: np.ndarray, eta: np.ndarray) -> np.ndarray:
        y, _ = normalize_columns(x + eta, "oblique retraction")
        return y

    def _transport_diff(
        self, x: np.ndarray, eta: np.ndarray, xi: np.ndarray, y: np.ndarray
    ) -> np.ndarray:
        norms = np.linalg.norm(x + eta, axis=0)
        return (xi - y * np.sum(y * xi, axis=0)) / norms

    def _random_point(self, rng: np.random.Generator) -> np.ndarray:
        x, _ = normalize_columns(rng.standard_normal(self.ambient_shape), "random point")
        return x

    def check_point(self, x: np.ndarray, tol: float = POINT_TOL) -> None:
        x = np.asarray(x)
        if x.shape != self.ambient_shape:
            raise ContractViolation(
                f"oblique point has shape {x.shape}, expected {self.ambient_shape}"
            )
        err = float(np.max(np.abs(np.sum(x * x, axis=0) - 1.0)))
        if err > tol:
            raise ContractViolation(f"oblique point columns are not unit norm (error {err:.3e})")
