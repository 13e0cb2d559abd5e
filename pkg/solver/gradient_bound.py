"""
Gradient Bound Module

This module checks the gradient estimate

    sup_Ω W e^{−Cu} ≤ max{A, limsup_{x→∂Ω} W e^{−Cu}}

on converged Newton solves, with the boundary limsup replaced by the maximum
over the Dirichlet nodes.
"""

import logging

import numpy as np

from params.parameter_gate import check_gate, check_hp
from solver.bvp import GradientBoundResult, SolveReport
from utils.error_utils import PreconditionError

logger = logging.getLogger(__name__)

def verify_gradient_bound(report: SolveReport, kappa: float, C: float, A: float,
                          num_tol: float = 1e-6) -> GradientBoundResult:
    """
    Verify the gradient estimate on a solved field.

    Args:
        report: Converged solve report
        kappa: κ ≥ 0 with Ric ≥ −(m−1)κ² on the domain
        C: Exponent C ≥ 0
        A: Threshold A ≥ 1
        num_tol: Accepted numerical excess of the interior maximum

    Returns:
        GradientBoundResult with slack = max{A, boundary max} − interior max

    Raises:
        PreconditionError: If the solve did not converge, κ does not bound the
            base curvature, or (C, A) is not admissible for (m, κ, H)
    """
    spec = report.spec
    if not report.converged:
        raise PreconditionError("Gradient bound needs a converged solve", {"message": report.message})
    base = spec.domain.base
    if kappa < base.ricci_lower_bound:
        raise PreconditionError("kappa below the curvature bound of the base",
                                {"kappa": kappa, "base_kappa": base.ricci_lower_bound})
    m = base.dim
    if not check_hp(m, kappa, spec.H, C):
        raise PreconditionError("Parameters fail H^2/m + C^2 - (m-1)kappa^2 >= 0",
                                {"m": m, "kappa": kappa, "H": spec.H, "C": C})
    gate_ok, infimum = check_gate(m, kappa, spec.H, C, A)
    if not gate_ok:
        raise PreconditionError("(C, A) is not admissible", {"C": C, "A": A, "infimum": infimum})

    z = report.W * np.exp(-C * report.u)
    boundary = report.boundary_index()
    interior = np.ones(z.size, dtype=bool)
    interior[boundary] = False

    z_interior = float(np.max(z[interior]))
    z_boundary = float(np.max(z[boundary]))
    slack = max(A, z_boundary) - z_interior
    result = GradientBoundResult(z_interior, z_boundary, float(A), float(C), float(kappa), slack, num_tol)
    logger.info(
        f"Gradient bound (A={A}, C={C}, kappa={kappa}): interior {z_interior:.12g}, "
        f"boundary {z_boundary:.12g}, verdict {result.verdict}"
    )
    return result
