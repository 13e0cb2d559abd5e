"""
Graph Tensors Module

This module computes the geometry of the graph Σ = {(u(x), x)} over the base:
the gradient Du, the area element W, the graph metric and its inverse, the
covariant Hessian, the second fundamental form and the mean curvature. All
quantities are expressed in base coordinates, indices raised with σ^ij.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from graph.grid import GraphField
from graph.finite_differences import gradient, hessian

logger = logging.getLogger(__name__)

@dataclass(frozen=True, eq=False)
class GraphTensors:
    """
    Nodal tensors of a graph field.

    Shapes: scalars grid_shape, covectors grid_shape + (m,), two-tensors
    grid_shape + (m, m), Christoffel symbols grid_shape + (m, m, m) indexed [k, i, j].
    """
    du: np.ndarray
    du_up: np.ndarray
    W: np.ndarray
    sigma: np.ndarray
    sigma_inv: np.ndarray
    christoffel: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    hess_partial: np.ndarray
    hess: np.ndarray
    II: np.ndarray
    H_field: np.ndarray

    @property
    def du_norm_sq(self) -> np.ndarray:
        """|Du|² in the base metric."""
        return np.einsum("...i,...i->...", self.du, self.du_up)

    @property
    def grad_norm_sq(self) -> np.ndarray:
        """‖∇u‖² in the graph metric, equal to (W² − 1)/W²."""
        return np.einsum("...ij,...i,...j->...", self.g_inv, self.du, self.du)

    @property
    def II_norm_sq(self) -> np.ndarray:
        """‖II‖² with both indices raised by the graph metric."""
        return np.einsum("...ia,...jb,...ij,...ab->...", self.g_inv, self.g_inv, self.II, self.II)

    @property
    def graph_hessian_u(self) -> np.ndarray:
        """Graph Hessian ∇²u = u_ij / W²."""
        return self.hess / self.W[..., None, None] ** 2

    @property
    def dW(self) -> np.ndarray:
        """Differential of W by the chain rule, W_i = u^j u_ij / W."""
        return np.einsum("...j,...ji->...i", self.du_up, self.hess) / self.W[..., None]

    def inner(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Graph-metric pairing g^ij a_i b_j of two covector fields."""
        return np.einsum("...ij,...i,...j->...", self.g_inv, a, b)

def covariant_hessian(f: np.ndarray, df: np.ndarray, spacing: Tuple[float, ...],
                      christoffel: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Covariant σ-Hessian f_;ij = ∂_i∂_j f − γ^k_ij ∂_k f.

    Args:
        f: Nodal field
        df: Its partial derivatives (grid_shape + (m,))
        spacing: Grid spacing
        christoffel: γ^k_ij per node

    Returns:
        Tuple of (partial Hessian, covariant Hessian)
    """
    partial = hessian(f, spacing)
    return partial, partial - np.einsum("...kij,...k->...ij", christoffel, df)

def compute_tensors(field: GraphField) -> GraphTensors:
    """
    Compute all nodal graph tensors of a field.

    Args:
        field: Graph field

    Returns:
        GraphTensors snapshot
    """
    base = field.domain.base
    coords = field.coords
    spacing = field.spacing

    sigma = base.metric_field(coords)
    sigma_inv = base.inverse_metric_field(coords)
    christoffel = base.christoffel_field(coords)

    du = gradient(field.u, spacing)
    du_up = np.einsum("...ij,...j->...i", sigma_inv, du)
    du_norm_sq = np.einsum("...i,...i->...", du, du_up)
    W = np.sqrt(1.0 + du_norm_sq)

    g = sigma + du[..., :, None] * du[..., None, :]
    g_inv = sigma_inv - du_up[..., :, None] * du_up[..., None, :] / (W ** 2)[..., None, None]

    hess_partial, hess = covariant_hessian(field.u, du, spacing, christoffel)
    II = hess / W[..., None, None]
    H_field = np.einsum("...ij,...ij->...", g_inv, II)

    logger.debug(f"Computed graph tensors on grid {field.grid.shape}, max W {float(W.max()):.6g}")
    return GraphTensors(du, du_up, W, sigma, sigma_inv, christoffel, g, g_inv,
                        hess_partial, hess, II, H_field)

def unit_normal(tensors: GraphTensors) -> Tuple[np.ndarray, np.ndarray]:
    """
    Upward unit normal n = (∂_y − u^j ∂_j)/W of the graph.

    Args:
        tensors: Graph tensors

    Returns:
        Tuple of (vertical component ⟨n, ∂_y⟩, horizontal components)
    """
    vertical = 1.0 / tensors.W
    horizontal = -tensors.du_up / tensors.W[..., None]
    return vertical, horizontal

def normal_norm_sq(tensors: GraphTensors) -> np.ndarray:
    """Ambient squared length of the unit normal, identically one."""
    vertical, horizontal = unit_normal(tensors)
    return vertical ** 2 + np.einsum("...ij,...i,...j->...", tensors.sigma, horizontal, horizontal)

def contact_angle(field: GraphField, tensors: GraphTensors, label: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    Contact angle along a boundary component.

    Returns γ = arctan|Du| at the boundary nodes and the deviation
    |⟨η, η̄⟩ − cos γ|, where η is the outward conormal of ∂Σ in the graph
    and η̄ the outward normal of ∂Ω. The deviation vanishes where Du is
    normal to the boundary, that is where u is locally constant along it.

    Args:
        field: Graph field
        tensors: Its tensors
        label: Boundary component label

    Returns:
        Tuple of (γ per boundary node, deviation per boundary node)
    """
    mask = field.boundary_mask(label)
    comp = field.domain.component(label)
    covector = comp.outward_covector(field.coords[mask])
    sigma_inv = tensors.sigma_inv[mask]
    g_inv = tensors.g_inv[mask]
    norm_sigma = np.sqrt(np.einsum("...ij,...i,...j->...", sigma_inv, covector, covector))
    norm_g = np.sqrt(np.einsum("...ij,...i,...j->...", g_inv, covector, covector))
    cos_eta = norm_g / norm_sigma
    gamma = np.arctan(np.sqrt(tensors.du_norm_sq[mask]))
    return gamma, np.abs(cos_eta - np.cos(gamma))
