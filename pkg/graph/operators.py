"""
Graph Operators Module

This module provides the Laplace-Beltrami operator of the graph metric, the
weighted operator 𝓛_W φ = Δ_g φ − 2⟨∇W/W, ∇φ⟩ (symmetric for the measure
W^{-2} dx_g) and the differential inequality check for z = W e^{−Cu}.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from graph.grid import GraphField
from graph.tensors import GraphTensors, compute_tensors, covariant_hessian
from graph.finite_differences import gradient
from utils.error_utils import PreconditionError, EmptyEvaluationError
from utils.report_utils import VerificationReport

logger = logging.getLogger(__name__)

def _tensors(field: GraphField, tensors: Optional[GraphTensors]) -> GraphTensors:
    return tensors if tensors is not None else compute_tensors(field)

def graph_laplacian(field: GraphField, phi: np.ndarray,
                    tensors: Optional[GraphTensors] = None) -> np.ndarray:
    """
    Laplace-Beltrami operator of the graph metric applied to a nodal function.

    Δ_g φ = g^ij φ_;ij − φ_k u^k H / W with φ_;ij the covariant σ-Hessian.

    Args:
        field: Graph field
        phi: Nodal function
        tensors: Precomputed tensors of the field

    Returns:
        Δ_g φ at every node; second order inside, one-sided on grid edges
    """
    t = _tensors(field, tensors)
    phi = np.asarray(phi, dtype=float)
    dphi = gradient(phi, field.spacing)
    _, phi_hess = covariant_hessian(phi, dphi, field.spacing, t.christoffel)
    trace = np.einsum("...ij,...ij->...", t.g_inv, phi_hess)
    drift = np.einsum("...k,...k->...", dphi, t.du_up) * t.H_field / t.W
    return trace - drift

def lw_operator(field: GraphField, phi: np.ndarray,
                tensors: Optional[GraphTensors] = None) -> np.ndarray:
    """
    Weighted operator 𝓛_W φ = Δ_g φ − 2⟨∇W/W, ∇φ⟩_g.

    Args:
        field: Graph field
        phi: Nodal function
        tensors: Precomputed tensors of the field

    Returns:
        𝓛_W φ at every node
    """
    t = _tensors(field, tensors)
    dphi = gradient(np.asarray(phi, dtype=float), field.spacing)
    return graph_laplacian(field, phi, t) - 2.0 * t.inner(t.dW, dphi) / t.W

def jacobi_potential(field: GraphField, tensors: GraphTensors) -> np.ndarray:
    """q = ‖II‖² + Ric̄(n, n) with the closed-form Ricci term of the base."""
    return tensors.II_norm_sq + field.domain.base.ricci_normal(tensors.du_norm_sq, tensors.W)

def cmc_residual(field: GraphField, tensors: GraphTensors, H: Optional[float] = None,
                 mask: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """
    Deviation of the discrete mean curvature from a constant.

    Args:
        field: Graph field
        tensors: Its tensors
        H: Target mean curvature; the median of the interior values when None
        mask: Nodes to use (interior nodes by default)

    Returns:
        Tuple of (H used, max |H_field − H| on the mask)
    """
    if mask is None:
        mask = field.interior_mask()
    if not np.any(mask):
        raise EmptyEvaluationError("No interior node to evaluate the mean curvature on")
    values = tensors.H_field[mask]
    H_used = float(np.median(values)) if H is None else float(H)
    return H_used, float(np.max(np.abs(values - H_used)))

def require_cmc(field: GraphField, tensors: GraphTensors, H: Optional[float],
                cmc_tol: float) -> float:
    """
    Raise PreconditionError unless the field has constant mean curvature within cmc_tol.

    Returns:
        The mean curvature used
    """
    H_used, deviation = cmc_residual(field, tensors, H)
    if deviation > cmc_tol:
        raise PreconditionError(
            "Field is not CMC-converged",
            {"H": H_used, "max_deviation": deviation, "cmc_tol": cmc_tol},
        )
    return H_used

def z_inequality_check(field: GraphField, C: float, kappa: float,
                       H: Optional[float] = None, cmc_tol: float = 1e-4,
                       slack_tol: float = 1e-6, h2_factor: float = 50.0) -> VerificationReport:
    """
    Check the differential inequality satisfied by z = W e^{−Cu}.

    Two residuals are reported on interior nodes:

    * ``identity``: |𝓛_W z − (‖II‖² − CH/W + Ric̄(n,n) + C²‖∇u‖²) z| with the
      exact Ricci term of the model base, expected O(h²);
    * ``lower_bound_violation``: the positive part of
      −min(𝓛_W z − [H²/m − CH/W + (C² − (m−1)κ²)(W² − 1)/W²] z),
      which must stay below ``slack_tol`` plus the O(h²) band h2_factor·h².

    Args:
        field: CMC graph field
        C: Exponent C ≥ 0
        kappa: κ ≥ 0 with Ric ≥ −(m−1)κ² on the domain
        H: Mean curvature; estimated from the field when None
        cmc_tol: Accepted deviation of the discrete mean curvature
        slack_tol: Accepted violation of the lower bound
        h2_factor: Identity tolerance is h2_factor·h²

    Returns:
        VerificationReport
    """
    base = field.domain.base
    if kappa < base.ricci_lower_bound:
        raise PreconditionError(
            "Ricci lower bound of the base is not covered by kappa",
            {"kappa": kappa, "base_kappa": base.ricci_lower_bound},
        )
    t = compute_tensors(field)
    H_used = require_cmc(field, t, H, cmc_tol)
    m = base.dim
    mask = field.interior_mask()

    z = t.W * np.exp(-C * field.u)
    lwz = lw_operator(field, z, t)
    grad_sq = t.grad_norm_sq

    exact_factor = jacobi_potential(field, t) - C * t.H_field / t.W + C ** 2 * grad_sq
    identity = np.abs(lwz - exact_factor * z)[mask]

    bound_factor = H_used ** 2 / m - C * H_used / t.W + (C ** 2 - (m - 1) * kappa ** 2) * grad_sq
    slack = (lwz - bound_factor * z)[mask]
    violation = max(0.0, -float(np.min(slack)))

    h = field.grid.h
    report = VerificationReport(
        name="z_inequality",
        residuals={"identity": float(np.max(identity)), "lower_bound_violation": violation},
        tolerances={"identity": h2_factor * h * h, "lower_bound_violation": slack_tol + h2_factor * h * h},
        grid=field.grid.describe(),
        details={"C": C, "kappa": kappa, "H": H_used, "min_slack": float(np.min(slack))},
    )
    logger.info(f"z inequality (C={C}, kappa={kappa}): residuals {report.residuals}, passed={report.passed}")
    return report
