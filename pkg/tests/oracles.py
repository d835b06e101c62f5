"""Independent reference computations shared by the test modules."""

from __future__ import annotations

import math

import numpy as np

from rcg.features.bench import RunRecord
from rcg.features.cg import TerminalStatus
from rcg.features.manifolds import (
    FixedRank,
    Manifold,
    Oblique,
    Point,
    Sphere,
    Stiefel,
    TangentVector,
)
from rcg.features.objectives import ProblemKind

SMALL_MANIFOLDS = [Sphere(5), Stiefel(3, 6), Oblique(4, 3), FixedRank(6, 5, 2)]


def scaled_tangent(M: Manifold, x: Point, seed: int, length: float) -> TangentVector:
    u = M.random_tangent(x, seed)
    return u * (length / M.norm(x, u))


def fd_transport(
    M: Manifold, x: Point, eta: TangentVector, xi: TangentVector, h: float = 1e-6
) -> np.ndarray:
    """Dense central difference of t -> R_x(eta + t xi) at t = 0."""
    forward = M.to_ambient(M.retract(x, eta + xi * h))
    backward = M.to_ambient(M.retract(x, eta - xi * h))
    return (forward - backward) / (2.0 * h)


def rel_err(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / max(1.0, np.linalg.norm(b)))


def record(problem: str, solver: str, iterations: int, solved: bool = True, **kw) -> RunRecord:
    fields = dict(
        problem_id=problem,
        problem_kind=ProblemKind.RAYLEIGH,
        instance_seed=0,
        solver_id=solver,
        iterations=iterations,
        wall_time=0.01 * (iterations + 1),
        cost_evals=2 * iterations + 1,
        grad_evals=iterations + 1,
        final_cost=1.0,
        final_grad_norm=1e-7 if solved else 1e-2,
        status=TerminalStatus.CONVERGED if solved else TerminalStatus.MAX_ITERS,
    )
    fields.update(kw)
    return RunRecord(**fields)


def brute_force_profile(records: list[RunRecord], solver: str, tau: float) -> float:
    """P_s(tau) by nested loops over the definition, failures as r = inf."""

    def cost(r: RunRecord) -> float:
        if r.status is not TerminalStatus.CONVERGED:
            return math.inf
        return float(max(r.iterations, 1))

    problems = sorted({r.problem_id for r in records})
    solvers = sorted({r.solver_id for r in records})
    table = {(r.problem_id, r.solver_id): cost(r) for r in records}
    count = 0
    for p in problems:
        best = min(table[(p, s)] for s in solvers)
        t = table[(p, solver)]
        if math.isinf(t):
            continue
        if t / best <= tau:
            count += 1
    return count / len(problems)
