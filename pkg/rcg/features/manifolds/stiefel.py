from __future__ import annotations

from typing import Any

import numpy as np
from scipy.linalg import solve_triangular

from ...core.error_handler import ContractViolation, RetractionError
from .base import POINT_TOL, Manifold


def _sym(b: np.ndarray) -> np.ndarray:
    return 0.5 * (b + b.T)


def qf(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR factorization normalized so that R has a positive diagonal."""
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    r = signs[:, None] * r
    diag = np.diag(r)
    if not np.all(np.isfinite(diag)) or np.min(diag) <= 1e-14 * max(1.0, float(np.max(diag))):
        raise RetractionError("QR retraction: X + eta is rank deficient")
    return q, r


def _rho_skew(a: np.ndarray) -> np.ndarray:
    lower = np.tril(a, -1)
    return lower - lower.T


class Stiefel(Manifold):
    """Stiefel manifold St(p, n) of n-by-p matrices with orthonormal columns."""

    kind = "stiefel"

    def __init__(self, p: int, n: int) -> None:
        if not 1 <= int(p) <= int(n):
            raise ContractViolation(f"Stiefel requires 1 <= p <= n, got p={p}, n={n}")
        self.p = int(p)
        self.n = int(n)

    @property
    def dim(self) -> int:
        return self.n * self.p - self.p * (self.p + 1) // 2

    @property
    def ambient_shape(self) -> tuple[int, ...]:
        return (self.n, self.p)

    def spec(self) -> dict[str, Any]:
        return {"kind": self.kind, "p": self.p, "n": self.n}

    def _project(self, x: np.ndarray, a: np.ndarray) -> np.ndarray:
        return a - x @ _sym(x.T @ a)

    def _retract(self, x: np.ndarray, eta: np.ndarray) -> np.ndarray:
        q, _ = qf(x + eta)
        return q

    def _transport_diff(
        self, x: np.ndarray, eta: np.ndarray, xi: np.ndarray, y: np.ndarray
    ) -> np.ndarray:
        # Dqf(M)[Z] = Q rho_skew(Q^T Z R^{-1}) + (I - Q Q^T) Z R^{-1}
        q, r = qf(x + eta)
        z = solve_triangular(r, xi.T, trans="T", lower=False).T
        qtz = q.T @ z
        return q @ _rho_skew(qtz) + z - q @ qtz

    def _random_point(self, rng: np.random.Generator) -> np.ndarray:
        q, _ = qf(rng.standard_normal(self.ambient_shape))
        return q

    def check_point(self, x: np.ndarray, tol: float = POINT_TOL) -> None:
        x = np.asarray(x)
        if x.shape != self.ambient_shape:
            raise ContractViolation(
                f"Stiefel point has shape {x.shape}, expected {self.ambient_shape}"
            )
        err = float(np.linalg.norm(x.T @ x - np.eye(self.p)))
        if err > tol:
            raise ContractViolation(f"Stiefel point columns are not orthonormal (error {err:.3e})")
