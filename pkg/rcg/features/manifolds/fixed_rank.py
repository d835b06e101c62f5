"""Manifold of m-by-n real matrices of fixed rank k, kept in factored form.

A point X = U S V^T is stored as ``FixedRankPoint(u, s, v)``.  A tangent
vector at X is ``U core V^T + up V^T + U vp^T`` with ``U^T up = 0`` and
``V^T vp = 0``, stored as ``FixedRankTangent(core, up, vp)``.  Inner products
and transports therefore cost O((m + n) k^2); dense m-by-n matrices only
appear when an objective needs them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.linalg import svd

from ...core.error_handler import ContractViolation, RetractionError
from .base import POINT_TOL, TANGENT_TOL, Manifold, TangentVector

# relative step of the central difference used for the differentiated retraction
FD_STEP = 1e-7


@dataclass(frozen=True, eq=False)
class FixedRankPoint:
    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    def same_as(self, other: object) -> bool:
        if not isinstance(other, FixedRankPoint):
            return False
        return all(
            a.shape == b.shape and bool(np.array_equal(a, b))
            for a, b in ((self.u, other.u), (self.s, other.s), (self.v, other.v))
        )


@dataclass(frozen=True, eq=False)
class FixedRankTangent:
    core: np.ndarray
    up: np.ndarray
    vp: np.ndarray

    def __add__(self, other: FixedRankTangent) -> FixedRankTangent:
        return FixedRankTangent(self.core + other.core, self.up + other.up, self.vp + other.vp)

    def __sub__(self, other: FixedRankTangent) -> FixedRankTangent:
        return FixedRankTangent(self.core - other.core, self.up - other.up, self.vp - other.vp)

    def __neg__(self) -> FixedRankTangent:
        return FixedRankTangent(-self.core, -self.up, -self.vp)

    def __mul__(self, scalar: float) -> FixedRankTangent:
        return FixedRankTangent(self.core * scalar, self.up * scalar, self.vp * scalar)

    __rmul__ = __mul__

    def vdot(self, other: FixedRankTangent) -> float:
        return float(
            np.vdot(self.core, other.core) + np.vdot(self.up, other.up) + np.vdot(self.vp, other.vp)
        )

    def is_zero(self) -> bool:
        return not (np.any(self.core) or np.any(self.up) or np.any(self.vp))


def _thin_qr(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q, r = np.linalg.qr(a)
    return q, r


class FixedRank(Manifold):
    """Embedded manifold M_k of m-by-n matrices of rank k.

    Retraction is the metric projection X + xi -> rank-k truncated SVD,
    computed from a 2k-by-2k core matrix.
    """

    kind = "fixed_rank"

    def __init__(self, m: int, n: int, k: int) -> None:
        m, n, k = int(m), int(n), int(k)
        if m < 1 or n < 1 or not 1 <= k <= min(m, n):
            raise ContractViolation(
                f"FixedRank requires 1 <= k <= min(m, n), got m={m}, n={n}, k={k}"
            )
        self.m = m
        self.n = n
        self.k = k

    @property
    def dim(self) -> int:
        return (self.m + self.n - self.k) * self.k

    @property
    def ambient_shape(self) -> tuple[int, ...]:
        return (self.m, self.n)

    def spec(self) -> dict[str, Any]:
        return {"kind": self.kind, "m": self.m, "n": self.n, "k": self.k}

    def _inner(self, a: FixedRankTangent, b: FixedRankTangent) -> float:
        return a.vdot(b)

    def _is_zero(self, value: FixedRankTangent) -> bool:
        return value.is_zero()

    def _zero_value(self, x: FixedRankPoint) -> FixedRankTangent:
        k = self.k
        return FixedRankTangent(np.zeros((k, k)), np.zeros((self.m, k)), np.zeros((self.n, k)))

    def to_ambient(self, x: FixedRankPoint) -> np.ndarray:
        return (x.u * np.diag(x.s)) @ x.v.T

    def tangent_to_ambient(self, u: TangentVector) -> np.ndarray:
        x, t = u.base, u.value
        return x.u @ t.core @ x.v.T + t.up @ x.v.T + x.u @ t.vp.T

    def _project(self, x: FixedRankPoint, a: np.ndarray) -> FixedRankTangent:
        av = a @ x.v
        atu = a.T @ x.u
        core = x.u.T @ av
        return FixedRankTangent(core, av - x.u @ core, atu - x.v @ core.T)

    def _retract(self, x: FixedRankPoint, eta: FixedRankTangent) -> FixedRankPoint:
        # X + eta = [U Qu] [[S + core, Rv^T], [Ru, 0]] [V Qv]^T
        k = self.k
        qu, ru = _thin_qr(eta.up)
        qv, rv = _thin_qr(eta.vp)
        block = np.block([[x.s + eta.core, rv.T], [ru, np.zeros((k, k))]])
        try:
            wu, sigma, wvt = svd(block, full_matrices=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise RetractionError(f"fixed-rank retraction: SVD failed ({exc})") from exc
        sigma_k = sigma[:k]
        if not np.all(np.isfinite(sigma_k)) or sigma_k[-1] <= 1e-13 * max(1.0, float(sigma_k[0])):
            raise RetractionError("fixed-rank retraction: rank collapsed below k")
        u_new = np.hstack([x.u, qu]) @ wu[:, :k]
        v_new = np.hstack([x.v, qv]) @ wvt[:k].T
        return FixedRankPoint(u_new, np.diag(sigma_k), v_new)

    def _transport_diff(
        self, x: FixedRankPoint, eta: FixedRankTangent, xi: FixedRankTangent, y: FixedRankPoint
    ) -> FixedRankTangent:
        # projected central difference of the retraction
        eta_norm = np.sqrt(max(eta.vdot(eta), 0.0))
        xi_norm = np.sqrt(max(xi.vdot(xi), 0.0))
        if xi_norm == 0.0:
            return self._zero_value(y)
        h = FD_STEP * max(1.0, eta_norm) / max(1.0, xi_norm)
        forward = self.to_ambient(self._retract(x, eta + xi * h))
        backward = self.to_ambient(self._retract(x, eta - xi * h))
        return self._project(y, (forward - backward) / (2.0 * h))

    def _random_point(self, rng: np.random.Generator) -> FixedRankPoint:
        qa, ra = _thin_qr(rng.standard_normal((self.m, self.k)))
        qb, rb = _thin_qr(rng.standard_normal((self.n, self.k)))
        w, sigma, zt = svd(ra @ rb.T)
        return FixedRankPoint(qa @ w, np.diag(sigma), qb @ zt.T)

    def check_point(self, x: FixedRankPoint, tol: float = POINT_TOL) -> None:
        if not isinstance(x, FixedRankPoint):
            raise ContractViolation("fixed-rank point must be a FixedRankPoint")
        k = self.k
        if x.u.shape != (self.m, k) or x.v.shape != (self.n, k) or x.s.shape != (k, k):
            raise ContractViolation("fixed-rank factors have wrong shapes")
        if np.linalg.norm(x.u.T @ x.u - np.eye(k)) > tol:
            raise ContractViolation("U factor is not orthonormal")
        if np.linalg.norm(x.v.T @ x.v - np.eye(k)) > tol:
            raise ContractViolation("V factor is not orthonormal")
        diag = np.diag(x.s)
        if np.any(x.s - np.diag(diag)) or np.any(diag <= 0):
            raise ContractViolation("S factor must be diagonal with positive entries")

    def check_tangent(self, u: TangentVector, tol: float = TANGENT_TOL) -> None:
        x, t = u.base, u.value
        if not isinstance(t, FixedRankTangent):
            raise ContractViolation("fixed-rank tangent must be a FixedRankTangent")
        scale = max(1.0, float(np.sqrt(t.vdot(t))))
        err = max(np.linalg.norm(x.u.T @ t.up), np.linalg.norm(x.v.T @ t.vp))
        if err > tol * scale:
            raise ContractViolation(f"vector is not tangent (residual {err:.3e})")
