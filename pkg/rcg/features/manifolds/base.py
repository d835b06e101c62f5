"""Embedded-submanifold base class shared by the four concrete geometries.

Every manifold here is a Riemannian submanifold of a Euclidean space with the
ambient (Frobenius) metric.  Points and tangent vectors are stored in ambient
coordinates, except for fixed-rank matrices where both are kept factored.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

from ...core.error_handler import ContractViolation, RetractionError

# Point/tangent representations are opaque per manifold: ndarray for the
# sphere, Stiefel and oblique manifolds, factored objects for fixed rank.
Point = Any
Value = Any

POINT_TOL = 1e-10
TANGENT_TOL = 1e-10


def same_point(a: Point, b: Point) -> bool:
    if a is b:
        return True
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return a.shape == b.shape and bool(np.array_equal(a, b))
    same_as = getattr(a, "same_as", None)
    return bool(same_as is not None and same_as(b))


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A tangent vector ``value`` in the tangent space at ``base``."""

    base: Point
    value: Value

    def _aligned(self, other: TangentVector) -> Value:
        if not same_point(self.base, other.base):
            raise ContractViolation("tangent vectors live at different base points")
        return other.value

    def __add__(self, other: TangentVector) -> TangentVector:
        if not isinstance(other, TangentVector):
            return NotImplemented
        return TangentVector(self.base, self.value + self._aligned(other))

    def __sub__(self, other: TangentVector) -> TangentVector:
        if not isinstance(other, TangentVector):
            return NotImplemented
        return TangentVector(self.base, self.value - self._aligned(other))

    def __neg__(self) -> TangentVector:
        return TangentVector(self.base, -self.value)

    def __mul__(self, scalar: float) -> TangentVector:
        return TangentVector(self.base, self.value * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> TangentVector:
        return TangentVector(self.base, self.value * (1.0 / float(scalar)))


class Manifold(ABC):
    """Geometry kernel: metric, projection, retraction and vector transports.

    Instances are immutable once constructed.
    """

    kind: str = ""

    @property
    @abstractmethod
    def dim(self) -> int:
        """Intrinsic dimension."""

    @property
    @abstractmethod
    def ambient_shape(self) -> tuple[int, ...]:
        """Shape of the dense ambient representation of a point."""

    @abstractmethod
    def spec(self) -> dict[str, Any]:
        """JSON-friendly description, inverse of :func:`manifold_from_spec`."""

    # -- per-manifold kernels on raw values ---------------------------------

    @abstractmethod
    def _project(self, x: Point, a: np.ndarray) -> Value: ...

    @abstractmethod
    def _retract(self, x: Point, eta: Value) -> Point: ...

    @abstractmethod
    def _transport_diff(self, x: Point, eta: Value, xi: Value, y: Point) -> Value: ...

    @abstractmethod
    def _random_point(self, rng: np.random.Generator) -> Point: ...

    @abstractmethod
    def check_point(self, x: Point, tol: float = POINT_TOL) -> None:
        """Raise :class:`ContractViolation` unless ``x`` is a valid point."""

    def _inner(self, a: Value, b: Value) -> float:
        return float(np.vdot(a, b))

    def _is_zero(self, value: Value) -> bool:
        return not np.any(value)

    def _zero_value(self, x: Point) -> Value:
        return np.zeros(self.ambient_shape)

    def to_ambient(self, x: Point) -> np.ndarray:
        return np.asarray(x)

    def tangent_to_ambient(self, u: TangentVector) -> np.ndarray:
        return np.asarray(u.value)

    # -- public operations ---------------------------------------------------

    def _check_base(self, x: Point, *vectors: TangentVector) -> None:
        for u in vectors:
            if not same_point(x, u.base):
                raise ContractViolation(f"tangent vector is not based at the given point of {self}")

    def inner(self, x: Point, u: TangentVector, v: TangentVector) -> float:
        self._check_base(x, u, v)
        return self._inner(u.value, v.value)

    def norm(self, x: Point, u: TangentVector) -> float:
        self._check_base(x, u)
        return float(np.sqrt(max(self._inner(u.value, u.value), 0.0)))

    def zero_vector(self, x: Point) -> TangentVector:
        return TangentVector(x, self._zero_value(x))

    def project(self, x: Point, a: np.ndarray) -> TangentVector:
        a = np.asarray(a, dtype=float)
        if a.shape != self.ambient_shape:
            raise ContractViolation(
                f"ambient array has shape {a.shape}, {self} expects {self.ambient_shape}"
            )
        return TangentVector(x, self._project(x, a))

    def retract(self, x: Point, eta: TangentVector) -> Point:
        self._check_base(x, eta)
        if self._is_zero(eta.value):
            return x
        return self._retract(x, eta.value)

    def transport_diff(
        self, x: Point, eta: TangentVector, xi: TangentVector, *, at: Point | None = None
    ) -> TangentVector:
        """Differentiated retraction ``DR_x(eta)[xi]``, based at ``R_x(eta)``.

        ``at`` may pass an already computed ``R_x(eta)`` to skip one retraction.
        """
        self._check_base(x, eta, xi)
        if self._is_zero(eta.value):
            return TangentVector(x, xi.value)
        y = self._retract(x, eta.value) if at is None else at
        return TangentVector(y, self._transport_diff(x, eta.value, xi.value, y))

    def transport_scaled(
        self, x: Point, eta: TangentVector, xi: TangentVector, *, at: Point | None = None
    ) -> tuple[TangentVector, float]:
        """Scaled vector transport; returns the vector and the applied scale."""
        t = self.transport_diff(x, eta, xi, at=at)
        t_norm = self.norm(t.base, t)
        eta_norm = self.norm(x, eta)
        if t_norm <= eta_norm or t_norm == 0.0:
            return t, 1.0
        scale = eta_norm / t_norm
        return t * scale, scale

    def random_point(self, seed: int) -> Point:
        return self._random_point(np.random.default_rng(seed))

    def random_tangent(self, x: Point, seed: int) -> TangentVector:
        rng = np.random.default_rng(seed)
        return self.project(x, rng.standard_normal(self.ambient_shape))

    def check_tangent(self, u: TangentVector, tol: float = TANGENT_TOL) -> None:
        """Raise unless projecting ``u`` onto its tangent space is the identity."""
        dense = self.tangent_to_ambient(u)
        back = self.tangent_to_ambient(self.project(u.base, dense))
        scale = max(1.0, float(np.linalg.norm(dense)))
        err = float(np.linalg.norm(back - dense))
        if err > tol * scale:
            raise ContractViolation(f"vector is not tangent (residual {err:.3e})")

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.spec().items() if k != "kind")
        return f"{type(self).__name__}({params})"


def normalize_columns(a: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    """Column-normalize ``a``; returns the normalized array and the norms used."""
    norms = np.linalg.norm(a, axis=0)
    if not np.all(np.isfinite(norms)) or np.any(norms <= np.finfo(float).tiny):
        raise RetractionError(f"{what}: cannot normalize a zero column")
    return a / norms, norms
