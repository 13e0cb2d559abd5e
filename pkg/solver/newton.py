"""
Newton Solver Module

This module solves the prescribed mean curvature equation on slabs and balls
with a damped Newton iteration. Both problems reduce to the one-dimensional
equation (ρ u'/W)' = H ρ in the variable t or r, with ρ ≡ 1 on slabs and
ρ = S(r)^{m−1} on balls. The divergence form is a finite volume scheme with
exact cell volumes; the non-divergence form expands the derivative into
u''/W³ + (ρ'/ρ) u'/W. Both Jacobians are tridiagonal and factored with
scipy's banded solver.
"""

import math
import logging
from typing import Callable, Dict, Any, List, Optional, Tuple

import numpy as np
from scipy import integrate, linalg

from profiles.radial_profile import mean_ratio
from solver.bvp import BvpSpec, SolveForm, SolveReport
from utils.error_utils import ArgumentError, ConvergenceError
from utils.logging_utils import ScenarioLogger

logger = logging.getLogger(__name__)

MAX_ITERS = 100
MAX_HALVINGS = 40

Assembly = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]

def _flux(p: np.ndarray) -> np.ndarray:
    return p / np.sqrt(1.0 + p * p)

def _flux_slope(p: np.ndarray) -> np.ndarray:
    return (1.0 + p * p) ** -1.5

def _radial_density(m: int, kappa: float, r: np.ndarray) -> np.ndarray:
    if kappa == 0.0:
        return r ** (m - 1)
    return (np.sinh(kappa * r) / kappa) ** (m - 1)

def _radial_log_derivative(m: int, kappa: float, r: np.ndarray) -> np.ndarray:
    if kappa == 0.0:
        return (m - 1) / r
    return (m - 1) * kappa / np.tanh(kappa * r)

def _cell_volumes(spec: BvpSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Face densities ρ_{i+½} (N−1 values) and cell volumes ∫ρ over the dual cells."""
    nodes = spec.nodes
    h = spec.spacing
    faces = 0.5 * (nodes[:-1] + nodes[1:])
    if not spec.radial:
        volumes = np.full(nodes.size, h)
        volumes[0] = volumes[-1] = 0.5 * h
        return np.ones(faces.size), volumes

    m = spec.domain.base.dim
    kappa = spec.domain.base.ricci_lower_bound
    edges = np.concatenate([[0.0], faces, [nodes[-1]]])
    if kappa == 0.0:
        volumes = np.diff(edges ** m) / m
    else:
        volumes = np.array([
            integrate.quad(lambda s: _radial_density(m, kappa, s), lo, hi,
                           epsabs=0.0, epsrel=1e-12)[0]
            for lo, hi in zip(edges[:-1], edges[1:])
        ])
    return _radial_density(m, kappa, faces), volumes

def check_feasibility(spec: BvpSpec) -> Dict[str, Any]:
    """
    Decide whether the Dirichlet problem has a solution.

    Slab (0, T) with data (a, b): the slope satisfies u'/W = w₀ + Ht, so a
    solution exists iff |H|T < 2 and |b − a| < √(|H|T(2 − |H|T))/|H|.
    Ball of radius R: u'/W = H f(r) with f the volume-to-area ratio, so a
    solution exists iff |H| f(R) < 1.

    Args:
        spec: Problem definition (domain, mean curvature, boundary data)

    Returns:
        Dictionary with "feasible", "criterion" and "value"
    """
    H = spec.H
    if spec.radial:
        m = spec.domain.base.dim
        kappa = spec.domain.base.ricci_lower_bound
        value = abs(H) * mean_ratio(m, kappa, spec.extent)
        feasible = value < 1.0
        result = {"feasible": feasible, "criterion": "|H| f(R) < 1", "value": value}
        if not feasible:
            entire = kappa > 0.0 and abs(H) <= (m - 1) * kappa
            result["reason"] = (
                "no radial graph reaches R with this mean curvature"
                + ("" if entire else "; for |H| > (m-1)kappa the space supports no entire CMC graph")
            )
        return result

    T = spec.extent
    jump = spec.dirichlet["t=T"] - spec.dirichlet["t=0"]
    if H == 0.0:
        return {"feasible": True, "criterion": "H = 0", "value": 0.0}
    ht = abs(H) * T
    if ht >= 2.0:
        return {"feasible": False, "criterion": "|H| T < 2", "value": ht,
                "reason": "the slab is wider than any graph of this mean curvature"}
    limit = math.sqrt(ht * (2.0 - ht)) / abs(H)
    feasible = abs(jump) < limit
    result = {"feasible": feasible, "criterion": "|b - a| < sqrt(|H|T(2 - |H|T))/|H|",
              "value": abs(jump), "limit": limit}
    if not feasible:
        result["reason"] = "boundary jump exceeds the range of CMC profiles over the slab"
    return result

def _divergence_assembly(spec: BvpSpec, free: slice) -> Assembly:
    rho, volumes = _cell_volumes(spec)
    h = spec.spacing
    H = spec.H
    n = spec.grid_n

    def assemble(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        p = np.diff(u) / h
        flux = rho * _flux(p)
        left = np.concatenate([[0.0], flux[:-1]])
        residual = (flux - left) / volumes[:-1] - H

        d = rho * _flux_slope(p) / h
        band = np.zeros((3, n - 1))
        band[0, 1:] = d[:-1] / volumes[:-2]
        band[1, :] = -(d + np.concatenate([[0.0], d[:-1]])) / volumes[:-1]
        band[2, :-1] = d[:-1] / volumes[1:-1]
        return residual[free], band[:, free]

    return assemble

def _non_divergence_assembly(spec: BvpSpec, free: slice) -> Assembly:
    h = spec.spacing
    H = spec.H
    n = spec.grid_n
    nodes = spec.nodes
    radial = spec.radial
    if radial:
        m = spec.domain.base.dim
        kappa = spec.domain.base.ricci_lower_bound
        drift = np.zeros(n - 1)
        drift[1:] = _radial_log_derivative(m, kappa, nodes[1:-1])
    else:
        m = 1
        drift = np.zeros(n - 1)

    def assemble(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        residual = np.zeros(n - 1)
        band = np.zeros((3, n - 1))

        lower, centre, upper = u[:-2], u[1:-1], u[2:]
        second = (upper - 2.0 * centre + lower) / h ** 2
        p = (upper - lower) / (2.0 * h)
        w = _flux_slope(p)
        dw = -3.0 * p * (1.0 + p * p) ** -2.5
        a = drift[1:]
        residual[1:] = second * w + a * _flux(p) - H

        side = (second * dw + a * w) / (2.0 * h)
        band[1, 1:] = -2.0 * w / h ** 2
        band[0, 2:] = (w / h ** 2 + side)[:-1]
        band[2, :-1] = w / h ** 2 - side

        if radial:
            # Symmetric ghost node u_{−1} = u_1: m u''(0) = H.
            residual[0] = 2.0 * m * (u[1] - u[0]) / h ** 2 - H
            band[1, 0] = -2.0 * m / h ** 2
            band[0, 1] = 2.0 * m / h ** 2
        return residual[free], band[:, free]

    return assemble

def _initial_guess(spec: BvpSpec) -> np.ndarray:
    if spec.radial:
        return np.full(spec.grid_n, spec.dirichlet["r=R"])
    a, b = spec.dirichlet["t=0"], spec.dirichlet["t=T"]
    return a + (b - a) * spec.nodes / spec.extent

def solve(spec: BvpSpec, tol: float = 1e-8, form: str = SolveForm.DIVERGENCE,
          max_iters: int = MAX_ITERS, scenario_logger: Optional[ScenarioLogger] = None) -> SolveReport:
    """
    Solve the Dirichlet problem by damped Newton iteration.

    Args:
        spec: Problem definition (domain, mean curvature, boundary data)
        tol: Target max-norm of the discrete residual
        form: "divergence" or "non_divergence"
        max_iters: Newton iteration cap
        scenario_logger: Optional step log receiving every iteration

    Returns:
        SolveReport; an unconverged report when the problem is infeasible

    Raises:
        ConvergenceError: If Newton does not reach tol within max_iters
    """
    if not tol > 0.0:
        raise ArgumentError("tol must be positive", {"tol": tol})
    if form not in (SolveForm.DIVERGENCE, SolveForm.NON_DIVERGENCE):
        raise ArgumentError(f"Unknown operator form: {form}")

    nodes = spec.nodes
    feasibility = check_feasibility(spec)
    if not feasibility["feasible"]:
        logger.warning(f"Infeasible problem: {feasibility}")
        return SolveReport(spec, np.array([]), np.array([]), 0, math.inf, (), False,
                           message=f"No solution exists: {feasibility['reason']}",
                           form=form, feasibility=feasibility)

    # Cells 0..N−2 carry residuals; the Dirichlet nodes are fixed.
    free = slice(0, spec.grid_n - 1) if spec.radial else slice(1, spec.grid_n - 1)
    assemble = (_divergence_assembly if form == SolveForm.DIVERGENCE else _non_divergence_assembly)(spec, free)

    u = _initial_guess(spec)
    residual, band = assemble(u)
    norm = float(np.max(np.abs(residual)))
    history: List[float] = [norm]
    iterations = 0

    while norm > tol:
        if iterations >= max_iters:
            raise ConvergenceError(f"Newton did not converge in {max_iters} iterations",
                                   history=history, details={"residual": norm})
        step = linalg.solve_banded((1, 1), band, -residual)

        lam = 1.0
        for _ in range(MAX_HALVINGS):
            trial = u.copy()
            trial[free] += lam * step
            trial_residual, trial_band = assemble(trial)
            trial_norm = float(np.max(np.abs(trial_residual)))
            if np.isfinite(trial_norm) and trial_norm < norm:
                break
            lam *= 0.5
        else:
            raise ConvergenceError("Line search failed to decrease the residual",
                                   history=history, details={"residual": norm})

        u, residual, band, norm = trial, trial_residual, trial_band, trial_norm
        iterations += 1
        history.append(norm)
        logger.debug(f"Newton iteration {iterations}: residual {norm:.3e}, damping {lam:g}")
        if scenario_logger is not None:
            scenario_logger.log_step(iterations, "newton", {"residual": norm, "damping": lam})

    logger.info(f"Newton ({form}) converged in {iterations} iterations, residual {norm:.3e}")
    return SolveReport(spec, u, nodes, iterations, norm, tuple(history), True,
                       message="converged", form=form, feasibility=feasibility)
