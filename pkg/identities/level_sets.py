"""
Level Sets Module

Pointwise frame of the level sets of u on the graph: the unit normal
ν = ∇u/‖∇u‖, the tangential projector and the split of a covector into
its normal and tangential parts. All norms use the graph metric g.
"""

import logging
from dataclasses import dataclass

import numpy as np

from graph.tensors import GraphTensors

logger = logging.getLogger(__name__)

# Level sets are regular where |Du| stays above this threshold.
GRADIENT_THRESHOLD = 1e-12

@dataclass(frozen=True, eq=False)
class LevelSetFrame:
    """Level-set frame on the nodes where |Du| ≥ threshold (zeros elsewhere)."""
    mask: np.ndarray
    grad_norm: np.ndarray
    nu: np.ndarray
    projector: np.ndarray
    graph_hessian: np.ndarray
    hessian_norm_sq: np.ndarray
    tangential_hessian_sq: np.ndarray

    def normal_part(self, covector: np.ndarray) -> np.ndarray:
        """a(ν) for a covector field a."""
        return np.einsum("...i,...i->...", covector, self.nu)

    def split(self, tensors: GraphTensors, covector: np.ndarray):
        """
        Squared graph norms of the normal and tangential parts of a covector.

        Returns:
            Tuple of (a(ν)², ‖a‖² − a(ν)²)
        """
        normal_sq = self.normal_part(covector) ** 2
        total = tensors.inner(covector, covector)
        return normal_sq, total - normal_sq

    def hessian_along_normal(self) -> np.ndarray:
        """∇²u(ν, ·), the differential of ‖∇u‖ by the chain rule."""
        return np.einsum("...ij,...j->...i", self.graph_hessian, self.nu)

def level_set_frame(tensors: GraphTensors, threshold: float = GRADIENT_THRESHOLD) -> LevelSetFrame:
    """
    Build the level-set frame of u.

    With M = g⁻¹∇²u and P = I − ν ⊗ ν♭, the squared norm of the Hessian is
    tr(M M) and its tangential restriction has squared norm tr(P M P M),
    which equals ‖∇u‖²‖A‖² for the second fundamental form A of the level set.

    Args:
        tensors: Graph tensors
        threshold: Minimum |Du| for a regular level set

    Returns:
        LevelSetFrame
    """
    mask = np.sqrt(tensors.du_norm_sq) >= threshold
    grad_norm_sq = tensors.grad_norm_sq
    grad_norm = np.sqrt(grad_norm_sq)
    safe = np.where(mask, grad_norm, 1.0)

    du_graph_up = np.einsum("...ij,...j->...i", tensors.g_inv, tensors.du)
    nu = np.where(mask[..., None], du_graph_up / safe[..., None], 0.0)
    nu_flat = np.where(mask[..., None], tensors.du / safe[..., None], 0.0)

    m = nu.shape[-1]
    projector = np.eye(m) - nu[..., :, None] * nu_flat[..., None, :]

    graph_hessian = tensors.graph_hessian_u
    mixed = np.einsum("...ik,...kj->...ij", tensors.g_inv, graph_hessian)
    hessian_norm_sq = np.einsum("...ij,...ji->...", mixed, mixed)
    tangential = np.einsum("...ij,...jk,...kl,...li->...", projector, mixed, projector, mixed)
    logger.debug(f"Level-set frame on {int(mask.sum())} of {mask.size} nodes")
    return LevelSetFrame(mask, grad_norm, nu, projector, graph_hessian, hessian_norm_sq,
                         np.where(mask, tangential, 0.0))
