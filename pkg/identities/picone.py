"""
Picone Module

Checks the Picone identity for the positive Jacobi-type function
w = v̄ + ε, which solves 𝓛_W w = 0 on a CMC graph:

    ∫_{∂Σ} φ² ⟨∇w/w, η⟩ dH_W = ∫_Σ ‖∇φ‖² dx_W − ∫_Σ w² ‖∇(φ/w)‖² dx_W,

with dx_W = W^{−2} dx_g and dH_W the boundary measure with the same weight.
Boundary integrals run over the grid faces that are boundary components;
test functions must vanish near any other boundary piece.
"""

import logging
from typing import Dict

import numpy as np

from graph.tensors import GraphTensors, compute_tensors
from identities.cases import (IdentityCase, face_weights, require_support_inside,
                              weighted_volume_weights)
from utils.error_utils import ArgumentError, EmptyEvaluationError, PreconditionError
from utils.report_utils import VerificationReport

logger = logging.getLogger(__name__)

def quotient_gradient(phi: np.ndarray, dphi: np.ndarray, w: np.ndarray, dw: np.ndarray) -> np.ndarray:
    """Differential of φ/w by the quotient rule."""
    return (dphi * w[..., None] - phi[..., None] * dw) / (w ** 2)[..., None]

def boundary_flux_term(case: IdentityCase, tensors: GraphTensors, w: np.ndarray,
                       dw: np.ndarray) -> Dict[str, float]:
    """
    ∫ φ² ⟨∇w/w, η⟩ dH_W over each boundary component met by supp φ.

    Args:
        case: Identity case
        tensors: Graph tensors of the case's field
        w: Positive nodal function
        dw: Its differential

    Returns:
        Mapping label → boundary integral
    """
    field = case.field
    support = case.support()
    terms = {}
    for comp in field.domain.boundary_components:
        near = np.abs(comp.level(field.coords)) <= 2 * field.grid.h
        if not np.any(support & near):
            terms[comp.label] = 0.0
            continue
        try:
            aligned = field.grid_aligned(comp.label)
        except EmptyEvaluationError:
            aligned = False
        if not aligned:
            require_support_inside(case, comp.label)
            terms[comp.label] = 0.0
            continue
        mask, weights = face_weights(field, tensors, comp.label)
        covector = comp.outward_covector(field.coords[mask])
        g_inv = tensors.g_inv[mask]
        conormal_norm = np.sqrt(np.einsum("...ij,...i,...j->...", g_inv, covector, covector))
        derivative = np.einsum("...ij,...i,...j->...", g_inv, dw[mask], covector) / conormal_norm
        integrand = case.test_fn[mask] ** 2 * derivative / w[mask] / tensors.W[mask] ** 2
        terms[comp.label] = float(np.sum(integrand * weights))
    return terms

def picone_check(case: IdentityCase, eps: float, h2_factor: float = 50.0) -> VerificationReport:
    """
    Evaluate the three terms of the Picone identity.

    Args:
        case: Identity case (field, Killing direction, test function)
        eps: Shift ε > 0 of w = v̄ + ε
        h2_factor: Tolerance is h2_factor·h²

    Returns:
        VerificationReport with residual "picone" and the terms in details

    Raises:
        ArgumentError: If ε ≤ 0
        PreconditionError: If v̄ + ε ≤ 0 on the support of φ
    """
    if not eps > 0.0:
        raise ArgumentError("eps must be positive", {"eps": eps})
    field = case.field
    t = compute_tensors(field)
    w = case.killing.vbar(t) + eps
    dw = case.killing.dvbar(t)
    support = case.support()
    if np.any(w[support] <= 0.0):
        raise PreconditionError("v̄ + eps must be positive on the support of the test function",
                                {"min": float(np.min(w[support]))})
    # φ = 0 off the support; any positive w keeps the quotient finite there.
    w = np.where(support | (w > 0.0), w, eps)

    phi = case.test_fn
    dphi = case.dphi
    weights = weighted_volume_weights(field, t)

    grad_term = float(np.sum(t.inner(dphi, dphi) * weights))
    dq = quotient_gradient(phi, dphi, w, dw)
    quotient_term = float(np.sum(w ** 2 * t.inner(dq, dq) * weights))
    boundary_terms = boundary_flux_term(case, t, w, dw)
    boundary_term = float(sum(boundary_terms.values()))

    residual = abs(boundary_term - (grad_term - quotient_term))
    h = field.grid.h
    report = VerificationReport(
        name="picone",
        residuals={"picone": residual},
        tolerances={"picone": h2_factor * h * h},
        grid=field.grid.describe(),
        details={
            "eps": eps,
            "boundary_term": boundary_term,
            "boundary_terms": boundary_terms,
            "gradient_term": grad_term,
            "quotient_term": quotient_term,
            "killing": case.killing.describe(),
        },
    )
    logger.info(f"Picone identity (eps={eps}): residual {residual:.3e}")
    return report
