"""Seeded instance generators reproducing the benchmark problem sizes."""

from __future__ import annotations

import logging
from typing import Any

import numpy as np
from scipy.linalg import qr

from ...core.error_handler import ContractViolation, UnknownProblemError
from .problems import (
    BrockettCost,
    LowRankCompletion,
    ObjectiveInstance,
    OffDiagonalCost,
    ProblemKind,
    RayleighQuotient,
)

log = logging.getLogger(__name__)

# Default sizes for each problem kind
DEFAULT_SIZES: dict[ProblemKind, dict[str, Any]] = {
    ProblemKind.RAYLEIGH: {"n": 100},
    ProblemKind.BROCKETT: {"n": 20, "p": 5},
    ProblemKind.COMPLETION: {"m": 100, "n": 100, "k": 4, "density": 0.5, "planted_rank": 0},
    ProblemKind.OFFDIAG: {"n": 100, "p": 5, "count": 10},
}


def random_spd(n: int, rng: np.random.Generator) -> np.ndarray:
    """A = Q D Q^T with Q orthogonal (QR of a Gaussian matrix) and D ~ U[1, 2]."""
    q, _ = qr(rng.standard_normal((n, n)))
    d = rng.uniform(1.0, 2.0, size=n)
    a = (q * d) @ q.T
    a = 0.5 * (a + a.T)
    if float(np.linalg.eigvalsh(a)[0]) <= 0.0:
        raise ContractViolation("generated matrix is not positive definite")
    return a


def _completion_target(
    shape: tuple[int, int], planted_rank: int, rng: np.random.Generator
) -> np.ndarray:
    """Standard-normal target, or a product of Gaussian factors when ``planted_rank`` > 0.

    Planted targets are scaled to unit-variance entries.
    """
    if planted_rank == 0:
        return rng.standard_normal(shape)
    if not 0 < planted_rank <= min(shape):
        raise ContractViolation(f"planted_rank must lie in [0, {min(shape)}], got {planted_rank}")
    left = rng.standard_normal((shape[0], planted_rank))
    right = rng.standard_normal((planted_rank, shape[1]))
    return (left @ right) / np.sqrt(planted_rank)


def resolve_sizes(kind: ProblemKind, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
    sizes = dict(DEFAULT_SIZES[kind])
    for key, value in (overrides or {}).items():
        if key not in sizes:
            raise ContractViolation(f"unknown size parameter {key!r} for {kind.value}")
        sizes[key] = value
    return sizes


def make_instance(kind: ProblemKind | str, seed: int, **sizes: Any) -> ObjectiveInstance:
    """Deterministically generate an instance of ``kind`` from ``seed``.

    Keyword arguments override the default problem sizes (e.g. ``n=40``).
    """
    try:
        kind = ProblemKind(kind)
    except ValueError as exc:
        raise UnknownProblemError(f"unknown problem kind: {kind!r}") from exc
    params = resolve_sizes(kind, sizes)
    rng = np.random.default_rng(seed)

    if kind is ProblemKind.RAYLEIGH:
        inst: ObjectiveInstance = RayleighQuotient(random_spd(params["n"], rng), seed)
    elif kind is ProblemKind.BROCKETT:
        weights = np.arange(1, params["p"] + 1, dtype=float)
        inst = BrockettCost(random_spd(params["n"], rng), np.diag(weights), seed)
    elif kind is ProblemKind.COMPLETION:
        shape = (params["m"], params["n"])
        a = _completion_target(shape, params["planted_rank"], rng)
        mask = rng.random(shape) < params["density"]
        inst = LowRankCompletion(a, mask, params["k"], seed)
    else:
        b = rng.standard_normal((params["count"], params["n"], params["n"]))
        cs = 0.5 * (b + np.swapaxes(b, 1, 2))
        inst = OffDiagonalCost(cs, params["p"], seed)

    log.debug("Generated instance %s on %r", inst.id, inst.manifold)
    return inst
