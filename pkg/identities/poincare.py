"""
Poincare Module

Evaluates the geometric Poincaré inequality of capillary graphs with a
positive Killing angle v̄ = (Du, X):

    ∫ [W²(‖∇_⊤‖∇u‖‖² + ‖∇u‖²‖A‖²) + Ric(Du, Du)/W²] φ²
        + ∫ (v̄²/W²) ‖∇(φ‖∇u‖W/v̄)‖²  ≤  ∫ ‖∇u‖² ‖∇φ‖²,

all integrals against dx_g. Over split profiles on a flat strip the
level sets are totally geodesic and the inequality is an equality.
"""

import logging
from typing import Dict, Any, List, Sequence

import numpy as np

from graph.operators import require_cmc
from graph.tensors import GraphTensors, compute_tensors
from identities.boundary import boundary_constancy
from identities.cases import IdentityCase, graph_volume_weights, weighted_volume_weights
from identities.level_sets import level_set_frame
from identities.picone import quotient_gradient
from utils.error_utils import ArgumentError, PreconditionError
from utils.report_utils import VerificationReport

logger = logging.getLogger(__name__)

def _check_preconditions(case: IdentityCase, t: GraphTensors, cmc_tol: float,
                         constancy_tol: float) -> np.ndarray:
    """Validate the hypotheses of the inequality and return v̄."""
    field = case.field
    require_cmc(field, t, None, cmc_tol)
    support = case.support()
    vbar = case.killing.vbar(t)
    if np.any(support) and np.min(vbar[support]) <= 0.0:
        raise PreconditionError("v̄ must be positive on the support of the test function",
                                {"min_vbar": float(np.min(vbar[support]))})

    du_norm = np.sqrt(t.du_norm_sq)
    for comp in field.domain.boundary_components:
        near = np.abs(comp.level(field.coords)) <= 2 * field.grid.h
        if not np.any(support & near):
            continue
        spread = boundary_constancy(field, comp.label, du_norm)
        if spread["u"] > constancy_tol or spread["du"] > constancy_tol:
            raise PreconditionError(
                f"Boundary data is not constant along {comp.label}",
                {"u_spread": spread["u"], "du_spread": spread["du"], "tol": constancy_tol},
            )
    return vbar

def poincare_terms(case: IdentityCase, t: GraphTensors, vbar: np.ndarray) -> Dict[str, float]:
    """
    The three integrals of the inequality.

    Returns:
        Dictionary with lhs1, lhs2, rhs and slack = rhs − lhs1 − lhs2
    """
    field = case.field
    frame = level_set_frame(t)
    phi = case.test_fn
    dphi = case.dphi
    support = case.support()
    weights = graph_volume_weights(field, t)

    a = frame.hessian_along_normal()
    _, tangential_sq = frame.split(t, a)
    ricci = field.domain.base.ricci_normal(t.du_norm_sq, t.W)
    level_terms = np.where(frame.mask, t.W ** 2 * (tangential_sq + frame.tangential_hessian_sq), 0.0)
    lhs1 = float(np.sum((level_terms + ricci) * phi ** 2 * weights))

    # ψ = φ |Du| / v̄, since ‖∇u‖ W = |Du|.
    du_norm = np.sqrt(t.du_norm_sq)
    safe_du = np.where(frame.mask, du_norm, 1.0)
    d_du_norm = np.where(frame.mask[..., None],
                         np.einsum("...j,...ji->...i", t.du_up, t.hess) / safe_du[..., None], 0.0)
    v = np.where(support | (vbar > 0.0), vbar, 1.0)
    dv = case.killing.dvbar(t)
    ratio_gradient = quotient_gradient(du_norm, d_du_norm, v, dv)
    dpsi = dphi * (du_norm / v)[..., None] + phi[..., None] * ratio_gradient
    lhs2 = float(np.sum(v ** 2 / t.W ** 2 * t.inner(dpsi, dpsi) * weights))

    rhs = float(np.sum(t.grad_norm_sq * t.inner(dphi, dphi) * weights))
    return {"lhs1": lhs1, "lhs2": lhs2, "rhs": rhs, "slack": rhs - lhs1 - lhs2}

def poincare_check(case: IdentityCase, cmc_tol: float = 1e-4, h2_factor: float = 10.0,
                   constancy_tol: float = 1e-8) -> VerificationReport:
    """
    Evaluate the Poincaré inequality on an identity case.

    Args:
        case: Identity case over a CMC field
        cmc_tol: Accepted deviation of the discrete mean curvature
        h2_factor: Accepted negative slack is h2_factor·h²
        constancy_tol: Accepted spread of u and |Du| on boundary components met by supp φ

    Returns:
        VerificationReport with residual "negative_slack" and the terms in details

    Raises:
        PreconditionError: If the field is not CMC, v̄ ≤ 0 on supp φ or the
            boundary data is not constant where supp φ meets ∂Ω
    """
    t = compute_tensors(case.field)
    vbar = _check_preconditions(case, t, cmc_tol, constancy_tol)
    terms = poincare_terms(case, t, vbar)
    h = case.field.grid.h
    report = VerificationReport(
        name="poincare",
        residuals={"negative_slack": max(0.0, -terms["slack"])},
        tolerances={"negative_slack": h2_factor * h * h},
        grid=case.field.grid.describe(),
        details=dict(terms, killing=case.killing.describe()),
    )
    logger.info(f"Poincare inequality: {terms}")
    return report

def poincare_epsilon_terms(case: IdentityCase, eps_values: Sequence[float],
                           cmc_tol: float = 1e-4) -> List[Dict[str, Any]]:
    """
    The ε-dependent error integrals left when v̄ is replaced by v̄ + ε.

    For each ε > 0, against dx_W:

    * ∫ ε/(v̄+ε) |2φW⟨∇φ, ∇W⟩ + φ²‖∇W‖²|
    * ∫ ε/(v̄+ε)² |φ² W ⟨∇v̄, ∇W⟩|
    * ∫ (ε/(v̄+ε))² φ² ‖∇W‖²

    Each term decreases monotonically to zero as ε → 0 once ε is below the
    minimum of v̄ > 0 on supp φ.

    Args:
        case: Identity case over a CMC field
        eps_values: Positive shifts
        cmc_tol: Accepted deviation of the discrete mean curvature

    Returns:
        One row per ε with the three terms
    """
    if any(not eps > 0.0 for eps in eps_values):
        raise ArgumentError("All eps values must be positive")
    t = compute_tensors(case.field)
    vbar = _check_preconditions(case, t, cmc_tol, constancy_tol=np.inf)
    support = case.support()
    v = np.where(support, vbar, 0.0)
    phi = case.test_fn
    dphi = case.dphi
    dW = t.dW
    dv = case.killing.dvbar(t)
    weights = weighted_volume_weights(case.field, t) * support

    first = np.abs(2.0 * phi * t.W * t.inner(dphi, dW) + phi ** 2 * t.inner(dW, dW))
    second = np.abs(phi ** 2 * t.W * t.inner(dv, dW))
    third = phi ** 2 * t.inner(dW, dW)

    rows = []
    for eps in eps_values:
        shift = eps / (v + eps)
        rows.append({
            "eps": float(eps),
            "cross_term": float(np.sum(shift * first * weights)),
            "killing_term": float(np.sum(shift / (v + eps) * second * weights)),
            "square_term": float(np.sum(shift ** 2 * third * weights)),
        })
    logger.info(f"Poincare eps terms over {len(rows)} shifts")
    return rows
