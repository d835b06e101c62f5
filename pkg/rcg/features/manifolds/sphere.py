from __future__ import annotations

from typing import Any

import numpy as np

from ...core.error_handler import ContractViolation
from .base import Manifold, normalize_columns


class Sphere(Manifold):
    """Unit sphere S^{n-1} in R^n, retraction by normalization."""

    kind = "sphere"

    def __init__(self, n: int) -> None:
        if int(n) < 2:
            raise ContractViolation(f"Sphere requires n >= 2, got {n}")
        self.n = int(n)

    @property
    def dim(self) -> int:
        return self.n - 1

    @property
    def ambient_shape(self) -> tuple[int, ...]:
        return (self.n,)

    def spec(self) -> dict[str, Any]:
        return {"kind": self.kind, "n": self.n}

    def _project(self, x: np.ndarray, a: np.ndarray) -> np.ndarray:
        return a - (x @ a) * x

    def _retract(self, x: np.ndarray, eta: np.ndarray) -> np.ndarray:
        y, _ = normalize_columns(x + eta, "sphere retraction")
        return y

    def _transport_diff(
        self, x: np.ndarray, eta: np.ndarray, xi: np.ndarray, y: np.ndarray
    ) -> np.ndarray:
        # D[(x+eta)/|x+eta|][xi] = (I - y y^T) xi / |x+eta|
        scale = np.linalg.norm(x + eta)
        return (xi - (y @ xi) * y) / scale

    def _random_point(self, rng: np.random.Generator) -> np.ndarray:
        x, _ = normalize_columns(rng.standard_normal(self.n), "random point")
        return x

    def check_point(self, x: np.ndarray, tol: float = 1e-12) -> None:
        x = np.asarray(x)
        if x.shape != self.ambient_shape:
            raise ContractViolation(
                f"sphere point has shape {x.shape}, expected {self.ambient_shape}"
            )
        if abs(float(np.linalg.norm(x)) - 1.0) > tol:
            raise ContractViolation("sphere point does not have unit norm")
