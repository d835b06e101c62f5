from __future__ import annotations

import json

import numpy as np
import pytest
from pydantic import ValidationError

from rcg.core.error_handler import ContractViolation
from rcg.features.cg import (
    NO_BOUND,
    BetaRule,
    BetaVariant,
    CgState,
    SolverConfig,
    TerminalStatus,
    XiChoice,
    beta,
    descent_audit,
    descent_bounds,
    initial_state,
    solve,
    step,
)
from rcg.features.linesearch import LineSearchConfig, ManifoldPhi, check_conditions
from rcg.features.manifolds import Sphere, TangentVector
from rcg.features.objectives import RayleighQuotient, make_instance

X_NEW = np.eye(3)[0]
SPHERE = Sphere(3)


def tv(a: float, b: float) -> TangentVector:
    return TangentVector(X_NEW, np.array([0.0, a, b]))


def moved(t_eta, t_g, *, g_norm_prev=1.0, dir_deriv_prev=-1.0, eta_norm_prev=1.0) -> CgState:
    return CgState(
        manifold=SPHERE,
        k=0,
        x=X_NEW,
        f=0.0,
        g=t_g,
        eta=t_eta,
        g_norm=g_norm_prev,
        dir_deriv=dir_deriv_prev,
        eta_norm=eta_norm_prev,
        transported_eta=t_eta,
        transported_g=t_g,
        g_norm_prev=g_norm_prev,
        dir_deriv_prev=dir_deriv_prev,
        eta_norm_prev=eta_norm_prev,
    )


def b(variant, state, g_new, **kw) -> float:
    return beta(BetaRule(variant=variant, **kw), state, g_new, X_NEW)


# -- rules --------------------------------------------------------------------


def test_rule_parameters_validated():
    with pytest.raises(ValidationError):
        BetaRule(mu=0.25)
    with pytest.raises(ContractViolation):
        BetaRule.parse("CD")


def test_rule_labels_round_trip():
    for label in ["FR", "PRP", "HS", "DY", "Hybrid1", "Hybrid2", "HZ", "SD", "SD-gd"]:
        assert BetaRule.parse(label).label == label
    assert BetaRule.parse("hz", mu=3.0).mu == 3.0


def test_beta_needs_transported_vectors():
    g = tv(1, 0)
    state = CgState(
        manifold=SPHERE, k=0, x=X_NEW, f=0.0, g=g, eta=-g, g_norm=1.0, dir_deriv=-1.0, eta_norm=1.0
    )
    with pytest.raises(ContractViolation):
        beta(BetaRule(), state, tv(1, 0), X_NEW)


def test_fletcher_reeves_equal_norms():
    state = moved(tv(0, 1), tv(0, 1))
    assert b(BetaVariant.FR, state, tv(1, 0)) == 1.0


def test_polak_ribiere_zero_gradient_change():
    g = tv(1, 0)
    assert b(BetaVariant.PRP, moved(tv(0, -1), g), g) == 0.0


def test_hybrid2_clips_negative_prp():
    g = tv(1, 0)
    state = moved(tv(0, -1), tv(2, 0))
    assert b(BetaVariant.PRP, state, g) == -1.0
    assert b(BetaVariant.HYBRID2, state, g) == 0.0


def test_hager_zhang_hand_computed():
    g = tv(1, 0)
    state = moved(tv(-1, 0.3), tv(0.5, 0.5), dir_deriv_prev=-0.8)
    # y = (0.5, -0.5), <g,y> = 0.5, <g,T eta> = -1, d = -0.2, ||y||^2 = 0.5
    assert b(BetaVariant.HZ, state, g) == pytest.approx(-2.5 + 25.0, rel=1e-14)
    assert b(BetaVariant.HS, state, g) == pytest.approx(-2.5, rel=1e-14)
    assert b(BetaVariant.DY, state, g) == pytest.approx(-5.0, rel=1e-14)
    assert b(BetaVariant.HZ, state, g, mu=1.0) == pytest.approx(-2.5 + 12.5, rel=1e-14)


def test_degenerate_denominator_gives_zero():
    g = tv(1, 0)
    # <g, T eta> equals the previous directional derivative
    state = moved(tv(-1, 0), tv(0, 1), dir_deriv_prev=-1.0)
    for variant in (BetaVariant.HS, BetaVariant.DY, BetaVariant.HZ, BetaVariant.HYBRID1):
        assert b(variant, state, g) == 0.0
    assert b(BetaVariant.FR, state, g) == 1.0


def _random_state(rng):
    def rt():
        return TangentVector(X_NEW, np.r_[0.0, rng.standard_normal(2)])

    t_eta, t_g, g = rt(), rt(), rt()
    return moved(t_eta, t_g, dir_deriv_prev=-abs(rng.standard_normal()) - 0.1), g


def test_sd_quotient_reproduces_hz():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        state, g = _random_state(rng)
        hs = b(BetaVariant.HS, state, g)
        hz = b(BetaVariant.HZ, state, g, mu=1.7)
        sd = b(BetaVariant.SD, state, g, mu=1.7)
        assert abs(sd - hz) <= 1e-12 * max(1.0, abs(hs), abs(hz - hs))


def test_sd_gradient_difference_matches_formula():
    g = tv(1, 0)
    state = moved(tv(-1, 0.3), tv(0.5, 0.5), g_norm_prev=2.0)
    xi = np.array([0.5, -0.5]) / 4.0
    expected = 1.0 * xi[0] - 2.0 * (xi @ xi) * (-1.0)
    value = b(BetaVariant.SD, state, g, xi_choice=XiChoice.GRADIENT_DIFFERENCE)
    assert value == pytest.approx(expected, rel=1e-14)


def test_hybrid_ranges():
    rng = np.random.default_rng(1)
    for _ in range(300):
        state, g = _random_state(rng)
        h1 = b(BetaVariant.HYBRID1, state, g)
        h2 = b(BetaVariant.HYBRID2, state, g)
        assert 0.0 <= h1 <= max(0.0, b(BetaVariant.DY, state, g))
        assert 0.0 <= h2 <= b(BetaVariant.FR, state, g)


# -- solver -------------------------------------------------------------------


def diag_rayleigh(n: int = 5) -> RayleighQuotient:
    return RayleighQuotient(np.diag(np.arange(1.0, n + 1.0)))


def test_solver_config_defaults():
    cfg = SolverConfig()
    assert cfg.solver_id == "HZ+strong_wolfe"
    assert not cfg.fallback_enabled
    assert SolverConfig(beta_rule=BetaRule(variant="PRP")).fallback_enabled
    hs = SolverConfig(beta_rule=BetaRule(variant="HS"), descent_fallback=False)
    assert not hs.fallback_enabled
    with pytest.raises(ValidationError):
        SolverConfig(tol=0.0)


def test_step_accepts_a_strong_wolfe_step():
    inst = make_instance("rayleigh", 0, n=20)
    x0 = inst.manifold.random_point(1)
    cfg = SolverConfig()
    state = initial_state(inst, x0)
    new_state, record = step(state, inst, cfg)
    assert record.k == 1
    assert new_state.f < state.f
    recheck = check_conditions(ManifoldPhi(inst, x0, state.eta), record.alpha, cfg.linesearch)
    assert recheck.strong_wolfe
    assert 0.0 < new_state.scale_s <= 1.0
    inst.manifold.check_tangent(new_state.eta, tol=1e-8)


def test_fletcher_reeves_decreases_monotonically():
    inst = diag_rayleigh()
    x0 = inst.manifold.random_point(4)
    cfg = SolverConfig(beta_rule=BetaRule(variant="FR"), linesearch=LineSearchConfig(c2=0.4))
    trace = solve(inst, x0, cfg)
    values = [r.f for r in trace.records]
    # ties within rounding of f are accepted by the Armijo test
    assert all(later <= earlier + 1e-14 for earlier, later in zip(values, values[1:]))
    assert trace.converged
    assert trace.final.f == pytest.approx(1.0, abs=1e-10)


def test_start_at_eigenvector_converges_immediately():
    inst = diag_rayleigh()
    trace = solve(inst, np.eye(5)[0], SolverConfig())
    assert trace.status is TerminalStatus.CONVERGED
    assert trace.iterations == 0
    assert len(trace.records) == 1
    assert (trace.cost_evals, trace.grad_evals) == (1, 1)


def test_rayleigh_reaches_smallest_eigenvalue():
    inst = make_instance("rayleigh", 7, n=100)
    cfg = SolverConfig(linesearch=LineSearchConfig(strategy="backtracking"))
    trace = solve(inst, inst.manifold.random_point(8), cfg)
    assert trace.converged
    assert trace.final.grad_norm <= cfg.tol
    assert trace.final.f == pytest.approx(inst.optimal_value(), abs=1e-8)


def test_final_zoutendijk_term_vanishes_on_convergence():
    inst = make_instance("brockett", 1, n=12, p=3)
    cfg = SolverConfig(beta_rule=BetaRule(variant="HZ"))
    trace = solve(inst, inst.manifold.random_point(2), cfg)
    assert trace.converged
    last = trace.final
    assert (last.dir_deriv / last.eta_norm) ** 2 <= 1e-12
    sums = [r.zoutendijk for r in trace.records]
    assert sums == sorted(sums)
    assert sums[0] == pytest.approx(trace.records[0].grad_norm**2)


def test_brockett_hybrid1_converges():
    inst = make_instance("brockett", 2, n=10, p=3)
    cfg = SolverConfig(beta_rule=BetaRule(variant="Hybrid1"), linesearch=LineSearchConfig(c2=0.4))
    trace = solve(inst, inst.manifold.random_point(3), cfg)
    assert trace.converged
    assert trace.final.f == pytest.approx(inst.optimal_value(), abs=1e-8)
    assert descent_audit(trace, cfg.beta_rule, cfg).ok


def test_trace_bookkeeping(tmp_path):
    inst = make_instance("rayleigh", 0, n=50)
    cfg = SolverConfig(tol=1e-12, max_iters=3)
    trace = solve(inst, inst.manifold.random_point(0), cfg)
    assert trace.status is TerminalStatus.MAX_ITERS
    assert [r.k for r in trace.records] == [0, 1, 2, 3]
    assert trace.records[0].beta is None
    assert all(r.alpha > 0 for r in trace.records[1:])
    evals = [r.cost_evals for r in trace.records]
    assert evals == sorted(evals)
    zout = [r.zoutendijk for r in trace.records]
    assert zout == sorted(zout)

    path = trace.write_jsonl(tmp_path / "trace" / "run.jsonl")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 4
    assert json.loads(lines[0])["k"] == 0
    assert json.loads(str(trace))["status"] == "MaxIters"


def test_failed_line_search_is_a_status():
    inst = make_instance("rayleigh", 0, n=10)
    ls = LineSearchConfig(strategy="backtracking", max_iters=1, alpha_hi=1e6)
    trace = solve(inst, inst.manifold.random_point(0), SolverConfig(linesearch=ls))
    assert trace.status is TerminalStatus.LINE_SEARCH_FAILED
    assert trace.iterations == 0
    assert trace.cost_evals == 2
    assert trace.message


# -- audit --------------------------------------------------------------------


def test_bounds_examples():
    bt = SolverConfig(linesearch=LineSearchConfig(strategy="backtracking"))
    hz = descent_bounds(BetaRule(), bt)
    assert hz.upper == pytest.approx(-0.875)

    fr_cfg = SolverConfig(beta_rule=BetaRule(variant="FR"), linesearch=LineSearchConfig(c2=0.4))
    fr = descent_bounds(fr_cfg.beta_rule, fr_cfg)
    assert fr.kappa == pytest.approx(1.0 / 3.0)
    assert fr.lower == pytest.approx(-1.0 / 0.6)

    # c2 >= 1/2 voids the Fletcher-Reeves guarantee
    assert descent_bounds(BetaRule(variant="FR"), SolverConfig()) is None


def test_prp_has_no_bound():
    cfg = SolverConfig(beta_rule=BetaRule(variant="PRP"))
    inst = diag_rayleigh()
    trace = solve(inst, inst.manifold.random_point(1), cfg)
    report = descent_audit(trace, cfg.beta_rule, cfg)
    assert not report.applicable
    assert not report.ok
    assert NO_BOUND in report.message


AUDIT_SIZES = {"rayleigh": {"n": 30}, "brockett": {"n": 10, "p": 3}, "offdiag": {"n": 6, "p": 3}}


@pytest.mark.parametrize("kind", list(AUDIT_SIZES))
def test_hz_descent_under_random_steps(kind):
    inst = make_instance(kind, 5, **AUDIT_SIZES[kind])
    cfg = SolverConfig(
        linesearch=LineSearchConfig(strategy="random_armijo"),
        descent_fallback=True,
        max_iters=300,
        seed=11,
    )
    trace = solve(inst, inst.manifold.random_point(6), cfg)
    report = descent_audit(trace, cfg.beta_rule, cfg)
    assert report.ok, report.message
    assert not any(r.fallback for r in trace.records)
    assert report.checked == len(trace.records)
