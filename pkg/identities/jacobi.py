"""
Jacobi Module

On a CMC graph the angle functions Θ = ⟨n, Y⟩ of Killing fields Y of the
ambient product solve the Jacobi equation Δ_g Θ + qΘ = 0, with
q = ‖II‖² + Ric̄(n, n). For Y = ∂_y this gives Θ = 1/W and, equivalently,

    Δ_g W = qW + 2‖∇W‖²/W,    𝓛_W W = qW.

For a Killing field X of the base, Θ = −v̄/W with v̄ = (Du, X), and the
quotient satisfies 𝓛_W v̄ = 0.
"""

import logging
from typing import Optional

import numpy as np

from graph.grid import GraphField
from graph.operators import graph_laplacian, jacobi_potential, lw_operator, require_cmc
from graph.tensors import compute_tensors
from graph.finite_differences import gradient
from identities.cases import KillingField
from utils.report_utils import VerificationReport

logger = logging.getLogger(__name__)

def jacobi_check(field: GraphField, killing: Optional[KillingField] = None,
                 cmc_tol: float = 1e-4, h2_factor: float = 50.0) -> VerificationReport:
    """
    Residuals of the Jacobi-type equations at interior nodes.

    Args:
        field: CMC graph field over a flat or hyperbolic base
        killing: Killing direction of the base (the v̄ residuals are skipped when None)
        cmc_tol: Accepted deviation of the discrete mean curvature
        h2_factor: Tolerance of every residual is h2_factor·h²

    Returns:
        VerificationReport with residuals jacobi_vertical, w_equation, lw_w
        and, with a Killing field, jacobi_killing and lw_killing

    Raises:
        PreconditionError: If the field is not CMC within cmc_tol
    """
    t = compute_tensors(field)
    H = require_cmc(field, t, None, cmc_tol)
    mask = field.interior_mask()
    q = jacobi_potential(field, t)
    W = t.W

    def worst(values: np.ndarray) -> float:
        return float(np.max(np.abs(values[mask])))

    theta = 1.0 / W
    dW = gradient(W, field.spacing)
    grad_W_sq = t.inner(dW, dW)
    residuals = {
        "jacobi_vertical": worst(graph_laplacian(field, theta, t) + q * theta),
        "w_equation": worst(graph_laplacian(field, W, t) - q * W - 2.0 * grad_W_sq / W),
        "lw_w": worst(lw_operator(field, W, t) - q * W),
    }
    if killing is not None:
        killing.validate(field)
        vbar = killing.vbar(t)
        residuals["jacobi_killing"] = worst(graph_laplacian(field, vbar / W, t) + q * vbar / W)
        residuals["lw_killing"] = worst(lw_operator(field, vbar, t))

    h = field.grid.h
    report = VerificationReport(
        name="jacobi",
        residuals=residuals,
        tolerances={key: h2_factor * h * h for key in residuals},
        grid=field.grid.describe(),
        details={"H": H, "killing": killing.describe() if killing else None},
    )
    logger.info(f"Jacobi residuals {residuals}")
    return report
