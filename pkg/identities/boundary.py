"""
Boundary Identity Module

On a boundary component where u and |Du| are constant, the integral curves
of Du have zero geodesic curvature and

    ⟨W‖∇u‖² ∇v̄, ∇u⟩ = ⟨v̄ ∇W, ∇u⟩,

with v̄ = (Du, X) for a Killing field X. This module evaluates both sides at
the boundary nodes with the grid's one-sided stencils.
"""

import logging
from typing import Dict, Optional, Sequence

import numpy as np

from graph.grid import GraphField
from graph.tensors import compute_tensors
from identities.cases import KillingField
from utils.error_utils import PreconditionError
from utils.report_utils import VerificationReport

logger = logging.getLogger(__name__)

def boundary_constancy(field: GraphField, label: str, du_norm: np.ndarray) -> Dict[str, float]:
    """Spread (max − min) of u and |Du| over the boundary nodes of a component."""
    mask = field.boundary_nodes(label)
    u = field.u[mask]
    gradient = du_norm[mask]
    return {"u": float(np.ptp(u)), "du": float(np.ptp(gradient))}

def boundary_identity_check(field: GraphField, killing: KillingField,
                            labels: Optional[Sequence[str]] = None,
                            constancy_tol: float = 1e-8,
                            h2_factor: float = 50.0) -> VerificationReport:
    """
    Evaluate the boundary identity on each boundary component.

    Args:
        field: Graph field with locally constant Dirichlet and Neumann data
        killing: Killing direction X
        labels: Components to check (all by default)
        constancy_tol: Accepted spread of u and |Du| along a component
        h2_factor: Tolerance is h2_factor·h²

    Returns:
        VerificationReport with one residual per component and the maximum

    Raises:
        PreconditionError: If u or |Du| is not constant along a component
    """
    killing.validate(field)
    t = compute_tensors(field)
    du_norm = np.sqrt(t.du_norm_sq)
    vbar = killing.vbar(t)
    dvbar = killing.dvbar(t)
    dW = t.dW

    lhs = t.W * t.grad_norm_sq * t.inner(dvbar, t.du)
    rhs = vbar * t.inner(dW, t.du)

    labels = list(labels) if labels is not None else [c.label for c in field.domain.boundary_components]
    residuals: Dict[str, float] = {}
    spreads = {}
    for label in labels:
        spread = boundary_constancy(field, label, du_norm)
        spreads[label] = spread
        if spread["u"] > constancy_tol or spread["du"] > constancy_tol:
            raise PreconditionError(
                f"Boundary data is not constant along {label}",
                {"u_spread": spread["u"], "du_spread": spread["du"], "tol": constancy_tol},
            )
        mask = field.boundary_nodes(label)
        residuals[f"boundary:{label}"] = float(np.max(np.abs(lhs - rhs)[mask]))

    h = field.grid.h
    residuals["boundary"] = max(residuals.values())
    report = VerificationReport(
        name="boundary_identity",
        residuals=residuals,
        tolerances={key: h2_factor * h * h for key in residuals},
        grid=field.grid.describe(),
        details={"killing": killing.describe(), "constancy": spreads},
    )
    logger.info(f"Boundary identity residuals {residuals}")
    return report
