"""Tests for the Newton solver of the Dirichlet problems and the gradient bound."""

import math

import numpy as np
import pytest

from geometry.base_metric import EuclideanMetric, HyperbolicMetric
from geometry.model_domain import ModelDomain
from params.parameter_gate import admissible_menu
from profiles.capillary_profile import CapillaryProfile, profile_eval
from profiles.radial_profile import RadialProfile, radial_eval
from scenario_engine import newton_tail
from solver.bvp import BvpSpec, SolveForm
from solver.gradient_bound import verify_gradient_bound
from solver.newton import check_feasibility, solve
from utils.error_utils import ArgumentError, ConvergenceError, PreconditionError
from utils.logging_utils import ScenarioLogger
from utils.report_utils import observed_order

SLAB_PROFILE = CapillaryProfile(1.0, 0.0, -0.5)
SLAB_WIDTH = 0.3

def slab_spec(n, profile=SLAB_PROFILE, width=SLAB_WIDTH, m=2):
    data = {"t=0": profile.b1, "t=T": float(profile_eval(profile, width).u)}
    return BvpSpec(ModelDomain.slab(EuclideanMetric(m), width), profile.H, data, n)

def slab_error(report, profile=SLAB_PROFILE):
    return float(np.max(np.abs(report.u - profile_eval(profile, report.nodes).u)))

def radial_spec(n, m=2, kappa=0.0, H=1.0, R=0.5):
    base = EuclideanMetric(m) if kappa == 0.0 else HyperbolicMetric(m, kappa)
    return BvpSpec(ModelDomain.ball(base, R), H, {"r=R": 0.0}, n)

def radial_error(report, m=2, kappa=0.0, H=1.0, R=0.5):
    profile = RadialProfile(m, kappa, H)
    shift = -radial_eval(profile, R).u
    return float(np.max(np.abs(report.u - radial_eval(profile, report.nodes).u - shift)))

def test_slab_solve_matches_exact_profile():
    report = solve(slab_spec(1000))
    assert report.converged
    assert report.final_residual <= 1e-8
    assert slab_error(report) < 1e-6
    history = report.convergence_history
    assert all(later < earlier for earlier, later in zip(history[:-1], history[1:]))

def test_flat_ball_solve_matches_spherical_cap():
    report = solve(radial_spec(1000))
    assert report.converged
    assert radial_error(report) < 1e-6

def test_wide_slab_with_horizontal_contact_converges_quadratically():
    profile = CapillaryProfile(1.0, 0.0, 0.0)
    report = solve(slab_spec(1000, profile=profile, width=0.8))
    assert report.converged
    assert slab_error(report, profile) < 1e-6
    assert newton_tail(list(report.convergence_history)) < 10.0

def test_hemisphere_cap_over_the_unit_disk():
    profile = RadialProfile(2, 0.0, 1.0)
    spec = BvpSpec(ModelDomain.ball(EuclideanMetric(2), 1.0), 1.0, {"r=R": 2.0 - math.sqrt(3.0)}, 1000)
    report = solve(spec)
    assert report.converged
    assert np.max(np.abs(report.u - radial_eval(profile, report.nodes).u)) < 1e-6
    assert newton_tail(list(report.convergence_history)) < 100.0

def test_minimal_slab_is_affine_without_newton_steps():
    spec = BvpSpec(ModelDomain.slab(EuclideanMetric(2), 1.0), 0.0, {"t=0": 0.0, "t=T": 1.5}, 200)
    report = solve(spec)
    assert report.converged
    assert report.newton_iters == 0
    assert np.allclose(report.u, 1.5 * report.nodes, atol=1e-12)
    assert newton_tail(list(report.convergence_history)) is None

def test_hyperbolic_ball_solve_matches_radial_profile():
    report = solve(radial_spec(1000, kappa=1.0, H=0.5, R=0.8))
    assert report.converged
    assert radial_error(report, kappa=1.0, H=0.5, R=0.8) < 1e-6

def test_slab_solve_converges_at_second_order():
    sizes = (51, 101, 201)
    reports = [solve(slab_spec(n), tol=1e-10) for n in sizes]
    order = observed_order([r.spec.spacing for r in reports], [slab_error(r) for r in reports])
    assert order == pytest.approx(2.0, abs=0.2)

def test_ball_solve_converges_at_second_order():
    sizes = (51, 101, 201)
    reports = [solve(radial_spec(n), tol=1e-10) for n in sizes]
    order = observed_order([r.spec.spacing for r in reports], [radial_error(r) for r in reports])
    assert order == pytest.approx(2.0, abs=0.2)

def test_operator_forms_agree_under_refinement():
    gaps = []
    for n in (101, 401):
        divergence = solve(slab_spec(n), tol=1e-9)
        expanded = solve(slab_spec(n), tol=1e-9, form=SolveForm.NON_DIVERGENCE)
        assert expanded.form == SolveForm.NON_DIVERGENCE
        gaps.append(float(np.max(np.abs(divergence.u - expanded.u))))
    assert gaps[1] < gaps[0] / 8.0

def test_newton_steps_are_logged():
    scenario_logger = ScenarioLogger("solver_steps")
    report = solve(slab_spec(101), scenario_logger=scenario_logger)
    steps = scenario_logger.get_steps("newton")
    assert len(steps) == report.newton_iters
    assert steps[-1]["values"]["residual"] == report.final_residual

def test_iteration_cap_raises_with_history():
    with pytest.raises(ConvergenceError) as info:
        solve(slab_spec(101), max_iters=1)
    assert len(info.value.history) == 2

@pytest.mark.parametrize("spec", [
    BvpSpec(ModelDomain.slab(EuclideanMetric(2), 2.5), 1.0, {"t=0": 0.0, "t=T": 0.0}, 50),
    BvpSpec(ModelDomain.slab(EuclideanMetric(2), 1.0), 1.0, {"t=0": 0.0, "t=T": 2.0}, 50),
    BvpSpec(ModelDomain.ball(EuclideanMetric(2), 3.0), 1.0, {"r=R": 0.0}, 50),
    BvpSpec(ModelDomain.ball(HyperbolicMetric(2, 1.0), 3.0), 1.5, {"r=R": 0.0}, 50),
])
def test_infeasible_problems_return_unconverged_reports(spec):
    report = solve(spec)
    assert not report.converged
    assert report.u.size == 0
    assert report.message.startswith("No solution exists")
    assert not report.feasibility["feasible"]

def test_feasibility_of_minimal_slabs():
    spec = BvpSpec(ModelDomain.slab(EuclideanMetric(2), 5.0), 0.0, {"t=0": 0.0, "t=T": 100.0}, 20)
    assert check_feasibility(spec)["feasible"]

def test_problem_validation():
    slab = ModelDomain.slab(EuclideanMetric(2), 1.0)
    with pytest.raises(ArgumentError):
        BvpSpec(slab, 1.0, {"t=0": 0.0, "t=T": 0.0}, 10)
    with pytest.raises(ArgumentError):
        BvpSpec(slab, 1.0, {"t=0": 0.0}, 50)
    with pytest.raises(ArgumentError):
        BvpSpec(ModelDomain.half_space(EuclideanMetric(2)), 1.0, {"graph": 0.0}, 50)
    with pytest.raises(ArgumentError):
        BvpSpec(ModelDomain.slab(EuclideanMetric(2)), 1.0, {"t=0": 0.0}, 50)
    with pytest.raises(ArgumentError):
        solve(slab_spec(50), tol=0.0)
    with pytest.raises(ArgumentError):
        solve(slab_spec(50), form="spectral")

def test_solution_table():
    report = solve(slab_spec(101))
    frame = report.to_frame(C=0.5)
    assert list(frame.columns) == ["node", "u", "du", "W", "z"]
    assert np.allclose(frame["z"], frame["W"] * np.exp(-0.5 * frame["u"]))
    assert report.to_dict()["converged"] is True

def test_gradient_bound_on_slab_solve():
    report = solve(slab_spec(1000))
    result = verify_gradient_bound(report, kappa=0.0, C=0.0, A=1.0)
    assert result.verdict == "pass"
    assert result.z_boundary_max == pytest.approx(report.W[-1])
    with_bound = report.with_gradient_bound(result)
    assert with_bound.to_dict()["gradient_bound"]["verdict"] == "pass"

@pytest.mark.parametrize("kappa", [0.5, 1.0])
def test_gradient_bound_for_every_menu_choice(kappa):
    report = solve(slab_spec(400))
    for entry in admissible_menu(2, kappa, report.spec.H):
        assert verify_gradient_bound(report, kappa, entry.C, entry.A).verdict == "pass"

def test_gradient_bound_on_hyperbolic_ball():
    report = solve(radial_spec(400, kappa=1.0, H=0.5, R=0.8))
    for entry in admissible_menu(2, 1.0, 0.5):
        assert verify_gradient_bound(report, 1.0, entry.C, entry.A).verdict == "pass"

def test_gradient_bound_preconditions():
    hyperbolic = solve(radial_spec(100, kappa=1.0, H=0.5, R=0.8))
    with pytest.raises(PreconditionError):
        verify_gradient_bound(hyperbolic, kappa=0.5, C=2.0, A=2.0)
    slab = solve(slab_spec(100))
    with pytest.raises(PreconditionError):
        verify_gradient_bound(slab, kappa=1.0, C=0.0, A=1.0)
    infeasible = solve(BvpSpec(ModelDomain.slab(EuclideanMetric(2), 2.5), 1.0, {"t=0": 0.0, "t=T": 0.0}, 50))
    with pytest.raises(PreconditionError):
        verify_gradient_bound(infeasible, kappa=0.0, C=0.0, A=1.0)
