"""Backtracking Armijo search and strong-Wolfe bracketing with zoom."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ...core.error_handler import ContractViolation, LineSearchError
from .config import Interpolation, LineSearchConfig, LineSearchStrategy
from .phi import Phi

log = logging.getLogger(__name__)

ZOOM_COLLAPSE = 1e-16
# phi values within this many ulps of phi(0) are treated as equal
NOISE_ULPS = 16


@dataclass(frozen=True)
class Conditions:
    armijo: bool
    wolfe: bool
    strong_wolfe: bool


def _require_descent(phi: Phi) -> float:
    dphi0 = phi.dphi0
    if not dphi0 < 0.0:
        raise ContractViolation(f"search direction is not a descent direction (phi'(0)={dphi0})")
    return dphi0


def _noise(phi: Phi) -> float:
    return NOISE_ULPS * float(np.spacing(abs(phi.phi0)))


def _armijo(phi: Phi, alpha: float, c1: float) -> bool:
    return phi.value(alpha) <= phi.phi0 + c1 * alpha * phi.dphi0 + _noise(phi)


def check_conditions(phi: Phi, alpha: float, cfg: LineSearchConfig) -> Conditions:
    """Evaluate the Armijo, Wolfe and strong Wolfe conditions at ``alpha``."""
    if not alpha > 0.0:
        raise ContractViolation(f"step size must be positive, got {alpha}")
    dphi0 = phi.dphi0
    armijo = _armijo(phi, alpha, cfg.c1)
    if not armijo:
        return Conditions(False, False, False)
    slope = phi.derivative(alpha)
    wolfe = slope >= cfg.c2 * dphi0
    strong = abs(slope) <= cfg.c2 * abs(dphi0)
    return Conditions(armijo, wolfe, strong)


def backtracking(phi: Phi, cfg: LineSearchConfig, alpha_start: float | None = None) -> float:
    """Largest alpha_hi * rho^j passing the Armijo condition."""
    _require_descent(phi)
    alpha = cfg.alpha_hi if alpha_start is None else float(alpha_start)
    for _ in range(cfg.max_iters):
        if _armijo(phi, alpha, cfg.c1):
            return alpha
        alpha *= cfg.rho
    raise LineSearchError("Armijo condition not met within max_iters", alpha / cfg.rho)


def randomized_backtracking(
    phi: Phi, cfg: LineSearchConfig, rng: np.random.Generator
) -> float:
    """Backtracking from a random initial trial in [0.05, 1] * alpha_hi."""
    return backtracking(phi, cfg, alpha_start=cfg.alpha_hi * rng.uniform(0.05, 1.0))


def _interpolate(phi: Phi, lo: float, hi: float, cfg: LineSearchConfig) -> float:
    mid = 0.5 * (lo + hi)
    if cfg.interpolation is Interpolation.BISECTION:
        return mid
    # minimizer of the quadratic through phi(lo), phi'(lo), phi(hi)
    d = hi - lo
    phi_lo, dphi_lo, phi_hi = phi.value(lo), phi.derivative(lo), phi.value(hi)
    denom = 2.0 * (phi_hi - phi_lo - dphi_lo * d)
    if not (np.isfinite(denom) and denom > 0.0):
        return mid
    trial = lo - dphi_lo * d * d / denom
    t = (trial - lo) / d
    if not 0.1 <= t <= 0.9:
        return mid
    return trial


def zoom(phi: Phi, alpha_lo: float, alpha_hi_local: float, cfg: LineSearchConfig) -> float:
    """Shrink a bracket until a strong-Wolfe step is found.

    ``alpha_lo`` has the lowest phi among Armijo-passing trials so far; the
    bracket need not be ordered.  A trial whose phi ties ``phi(alpha_lo)`` to
    within rounding keeps its side of the bracket by the sign of phi'.
    """
    dphi0 = _require_descent(phi)
    noise = _noise(phi)
    lo, hi = float(alpha_lo), float(alpha_hi_local)
    phi_lo = phi.value(lo)
    for _ in range(cfg.zoom_max_iters):
        if abs(hi - lo) < ZOOM_COLLAPSE:
            raise LineSearchError("zoom interval collapsed", lo)
        alpha = _interpolate(phi, lo, hi, cfg)
        phi_a = phi.value(alpha)
        if not _armijo(phi, alpha, cfg.c1) or phi_a > phi_lo + noise:
            hi = alpha
            continue
        slope = phi.derivative(alpha)
        if abs(slope) <= -cfg.c2 * dphi0:
            return alpha
        if slope * (hi - lo) >= 0.0:
            hi = lo
        lo, phi_lo = alpha, phi_a
    raise LineSearchError("zoom did not converge within zoom_max_iters", lo)


def strong_wolfe(phi: Phi, cfg: LineSearchConfig) -> float:
    """Bracketing search returning a step satisfying the strong Wolfe conditions."""
    dphi0 = _require_descent(phi)
    noise = _noise(phi)
    alpha_prev, phi_prev = 0.0, phi.phi0
    alpha = min(cfg.alpha0, cfg.alpha_max)
    for i in range(cfg.max_iters):
        phi_a = phi.value(alpha)
        if not _armijo(phi, alpha, cfg.c1) or (i >= 1 and phi_a > phi_prev + noise):
            return _verified(phi, zoom(phi, alpha_prev, alpha, cfg), cfg)
        slope = phi.derivative(alpha)
        if abs(slope) <= -cfg.c2 * dphi0:
            return _verified(phi, alpha, cfg)
        if slope >= 0.0:
            return _verified(phi, zoom(phi, alpha, alpha_prev, cfg), cfg)
        if alpha >= cfg.alpha_max:
            raise LineSearchError("no strong Wolfe step below alpha_max", alpha)
        alpha_prev, phi_prev = alpha, phi_a
        alpha = min(cfg.expansion * alpha, cfg.alpha_max)
    raise LineSearchError("bracketing did not terminate within max_iters", alpha_prev)


def _verified(phi: Phi, alpha: float, cfg: LineSearchConfig) -> float:
    cond = check_conditions(phi, alpha, cfg)
    if not cond.strong_wolfe:
        raise LineSearchError("returned step fails the strong Wolfe conditions", alpha)
    return alpha


def line_search(
    phi: Phi, cfg: LineSearchConfig, rng: np.random.Generator | None = None
) -> float:
    """Run the strategy selected by ``cfg.strategy``."""
    if cfg.strategy is LineSearchStrategy.STRONG_WOLFE:
        return strong_wolfe(phi, cfg)
    if cfg.strategy is LineSearchStrategy.RANDOM_ARMIJO:
        return randomized_backtracking(phi, cfg, rng or np.random.default_rng())
    return backtracking(phi, cfg)
