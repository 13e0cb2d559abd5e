"""
Kato Module

Checks the exact remainder of the Kato inequality on the graph,

    ‖∇²u‖² − ‖∇‖∇u‖‖² = ‖∇_⊤‖∇u‖‖² + ‖∇u‖²‖A‖²,

where ∇_⊤ is the part tangent to the level sets of u and A their second
fundamental form. ∇‖∇u‖ is differentiated numerically from the nodal
values of ‖∇u‖, so the residual measures the discretization error.
"""

import logging

import numpy as np

from graph.grid import GraphField
from graph.tensors import compute_tensors
from graph.finite_differences import gradient
from identities.level_sets import GRADIENT_THRESHOLD, level_set_frame
from utils.error_utils import EmptyEvaluationError
from utils.report_utils import VerificationReport

logger = logging.getLogger(__name__)

def kato_remainder_check(field: GraphField, h2_factor: float = 50.0,
                         threshold: float = GRADIENT_THRESHOLD) -> VerificationReport:
    """
    Evaluate both sides of the Kato remainder identity at interior nodes.

    Args:
        field: Graph field
        h2_factor: Tolerance is h2_factor·h²
        threshold: Nodes with |Du| below it are skipped

    Returns:
        VerificationReport with residual "kato"

    Raises:
        EmptyEvaluationError: If no interior node has a regular level set
    """
    t = compute_tensors(field)
    frame = level_set_frame(t, threshold)
    mask = frame.mask & field.interior_mask()
    if not np.any(mask):
        raise EmptyEvaluationError("No interior node with |Du| above the threshold",
                                   {"threshold": threshold})

    d_grad_norm = gradient(frame.grad_norm, field.spacing)
    normal_sq, tangential_sq = frame.split(t, d_grad_norm)

    lhs = frame.hessian_norm_sq - (normal_sq + tangential_sq)
    rhs = tangential_sq + frame.tangential_hessian_sq
    residual = float(np.max(np.abs(lhs - rhs)[mask]))

    h = field.grid.h
    report = VerificationReport(
        name="kato",
        residuals={"kato": residual},
        tolerances={"kato": h2_factor * h * h},
        grid=field.grid.describe(),
        details={"nodes": int(mask.sum()), "max_lhs": float(np.max(np.abs(lhs[mask])))},
    )
    logger.info(f"Kato remainder residual {residual:.3e} on {int(mask.sum())} nodes")
    return report
