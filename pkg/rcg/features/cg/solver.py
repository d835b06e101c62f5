"""Riemannian conjugate-gradient iteration with scaled vector transport."""

from __future__ import annotations

import logging
import time
from dataclasses import replace

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ...core.error_handler import LineSearchError
from ..linesearch import LineSearchConfig, LineSearchStrategy, ManifoldPhi, Objective, line_search
from ..manifolds import Point
from .rules import BetaRule, BetaVariant, beta
from .state import CgState, TerminalStatus, Trace, TraceRecord

log = logging.getLogger(__name__)


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    beta_rule: BetaRule = BetaRule()
    linesearch: LineSearchConfig = LineSearchConfig()
    tol: float = Field(1e-6, gt=0.0)
    max_iters: int = Field(5000, ge=0)
    # None: reset to -grad only for rules with no descent guarantee (PRP, HS)
    descent_fallback: bool | None = None
    # seeds the random initial trials of the random_armijo strategy
    seed: int | None = None

    @property
    def fallback_enabled(self) -> bool:
        if self.descent_fallback is not None:
            return self.descent_fallback
        return self.beta_rule.variant in (BetaVariant.PRP, BetaVariant.HS)

    @property
    def solver_id(self) -> str:
        return f"{self.beta_rule.label}+{self.linesearch.strategy.value}"


def _zoutendijk_term(dir_deriv: float, eta_norm: float) -> float:
    if eta_norm == 0.0:
        return 0.0
    return dir_deriv**2 / eta_norm**2


def initial_state(f: Objective, x0: Point) -> CgState:
    """State at k = 0 with eta_0 = -grad f(x_0)."""
    M = f.manifold
    M.check_point(x0)
    f0 = float(f.cost(x0))
    g0 = f.rgrad(x0)
    g_norm = M.norm(x0, g0)
    eta0 = -g0
    dir_deriv = M.inner(x0, g0, eta0)
    return CgState(
        manifold=M,
        k=0,
        x=x0,
        f=f0,
        g=g0,
        eta=eta0,
        g_norm=g_norm,
        dir_deriv=dir_deriv,
        eta_norm=g_norm,
        cost_evals=1,
        grad_evals=1,
        zoutendijk=_zoutendijk_term(dir_deriv, g_norm),
    )


def _record(state: CgState, **extra: object) -> TraceRecord:
    return TraceRecord(
        k=state.k,
        f=state.f,
        grad_norm=state.g_norm,
        dir_deriv=state.dir_deriv,
        eta_norm=state.eta_norm,
        scale_s=state.scale_s,
        cost_evals=state.cost_evals,
        grad_evals=state.grad_evals,
        zoutendijk=state.zoutendijk,
        **extra,
    )


def step(
    state: CgState,
    f: Objective,
    cfg: SolverConfig,
    rng: np.random.Generator | None = None,
) -> tuple[CgState, TraceRecord]:
    """One CG iteration: line search, retraction, transport, beta, new direction.

    Raises :class:`LineSearchError` (with the evaluations spent) when no
    step is accepted.
    """
    M = state.manifold
    if not state.dir_deriv < 0.0:
        raise LineSearchError("search direction is not a descent direction", 0.0)

    phi = ManifoldPhi(f, state.x, state.eta, f0=state.f, g0=state.g)
    try:
        alpha = line_search(phi, cfg.linesearch, rng)
    except LineSearchError as exc:
        raise LineSearchError(
            exc.reason,
            exc.alpha,
            state.cost_evals + phi.cost_evals,
            state.grad_evals + phi.grad_evals,
        ) from exc

    x_new = phi.point(alpha)
    f_new = phi.value(alpha)
    g_new = phi.gradient(alpha)

    step_vec = state.eta * alpha
    t_step, s = M.transport_scaled(state.x, step_vec, step_vec, at=x_new)
    transported_eta = t_step / alpha
    transported_g = M.transport_diff(state.x, step_vec, state.g, at=x_new) * s

    moved = replace(
        state,
        alpha_prev=alpha,
        transported_eta=transported_eta,
        transported_g=transported_g,
        scale_s=s,
        g_norm_prev=state.g_norm,
        dir_deriv_prev=state.dir_deriv,
        eta_norm_prev=state.eta_norm,
    )
    b = beta(cfg.beta_rule, moved, g_new, x_new)
    eta_new = -g_new + transported_eta * b
    dir_deriv = M.inner(x_new, g_new, eta_new)

    fallback = False
    if cfg.fallback_enabled and not dir_deriv < 0.0:
        log.debug("k=%d: beta=%.3e gives no descent, resetting to -grad", state.k + 1, b)
        eta_new = -g_new
        dir_deriv = M.inner(x_new, g_new, eta_new)
        fallback = True

    g_norm = M.norm(x_new, g_new)
    eta_norm = M.norm(x_new, eta_new)
    new_state = replace(
        moved,
        k=state.k + 1,
        x=x_new,
        f=f_new,
        g=g_new,
        eta=eta_new,
        g_norm=g_norm,
        dir_deriv=dir_deriv,
        eta_norm=eta_norm,
        cost_evals=state.cost_evals + phi.cost_evals,
        grad_evals=state.grad_evals + phi.grad_evals,
        zoutendijk=state.zoutendijk + _zoutendijk_term(dir_deriv, eta_norm),
    )
    record = _record(new_state, beta=b, alpha=alpha, fallback=fallback)
    log.debug(
        "k=%d f=%.10e |g|=%.3e alpha=%.3e beta=%.3e s=%.3f",
        record.k,
        record.f,
        record.grad_norm,
        alpha,
        b,
        s,
        extra={"event": "cg_iteration", "k": record.k},
    )
    return new_state, record


def solve(f: Objective, x0: Point, cfg: SolverConfig) -> Trace:
    """Iterate until ||grad f|| <= tol, max_iters, or a failed line search."""
    start = time.perf_counter()
    rng = (
        np.random.default_rng(cfg.seed)
        if cfg.linesearch.strategy is LineSearchStrategy.RANDOM_ARMIJO
        else None
    )
    state = initial_state(f, x0)
    records = [_record(state)]
    status = TerminalStatus.MAX_ITERS
    message = ""
    cost_evals, grad_evals = state.cost_evals, state.grad_evals

    while True:
        if state.g_norm <= cfg.tol:
            status = TerminalStatus.CONVERGED
            break
        if state.k >= cfg.max_iters:
            status = TerminalStatus.MAX_ITERS
            break
        try:
            state, record = step(state, f, cfg, rng)
        except LineSearchError as exc:
            status = TerminalStatus.LINE_SEARCH_FAILED
            message = str(exc)
            cost_evals = max(cost_evals, exc.cost_evals)
            grad_evals = max(grad_evals, exc.grad_evals)
            log.debug("Line search failed at k=%d: %s", state.k, exc)
            break
        records.append(record)
        cost_evals, grad_evals = state.cost_evals, state.grad_evals

    trace = Trace(
        records=records,
        status=status,
        x=state.x,
        rule=cfg.beta_rule.label,
        linesearch=cfg.linesearch.strategy.value,
        wall_time=time.perf_counter() - start,
        cost_evals=cost_evals,
        grad_evals=grad_evals,
        message=message,
    )
    log.info(
        "%s: %s after %d iterations (f=%.10e, |g|=%.3e)",
        cfg.solver_id,
        status.value,
        trace.iterations,
        trace.final.f,
        trace.final.grad_norm,
        extra={"event": "cg_solve", "status": status.value, "iterations": trace.iterations},
    )
    return trace
