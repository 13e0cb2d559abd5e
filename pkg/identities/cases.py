"""
Identity Cases Module

This module defines the inputs shared by the identity checks: Killing
directions of the base, smooth compactly supported test functions and the
IdentityCase bundle, plus the quadrature helpers for the graph measures.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from graph.grid import Grid, GraphField
from graph.tensors import GraphTensors
from graph.finite_differences import gradient
from utils.error_utils import ArgumentError, PreconditionError

logger = logging.getLogger(__name__)

# Test functions vanish on at least this many nodes next to free grid edges.
BUMP_MARGIN = 4
ZERO_TOL = 1e-14

@dataclass(frozen=True)
class KillingField:
    """The coordinate field X = ∂_axis, a Killing field of the base."""
    axis: int

    def validate(self, field: GraphField) -> None:
        if not field.domain.base.is_killing_axis(self.axis):
            raise ArgumentError(f"Coordinate axis {self.axis} is not a Killing direction of the base",
                                {"base": field.domain.base.describe()})

    def vbar(self, tensors: GraphTensors) -> np.ndarray:
        """v̄ = (Du, X) = u_axis."""
        return tensors.du[..., self.axis]

    def dvbar(self, tensors: GraphTensors) -> np.ndarray:
        """Differential of v̄, ∂_i u_axis, from the partial Hessian."""
        return tensors.hess_partial[..., :, self.axis]

    def describe(self) -> dict:
        return {"axis": self.axis}

def bump(x: np.ndarray, lower: float, upper: float) -> np.ndarray:
    """
    Smooth bump exp(−1/(1−s²)) of the rescaled variable s ∈ (−1, 1) on (lower, upper).

    Args:
        x: Points
        lower: Left end of the support
        upper: Right end of the support

    Returns:
        Bump values, zero outside (lower, upper)
    """
    if not upper > lower:
        raise ArgumentError("Bump support must have positive length", {"lower": lower, "upper": upper})
    s = (2.0 * np.asarray(x, dtype=float) - lower - upper) / (upper - lower)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out

def bump_function(grid: Grid, windows: Sequence[Optional[Tuple[float, float]]],
                  amplitude: float = 1.0) -> np.ndarray:
    """
    Tensor-product bump over the grid.

    A window ``None`` makes the factor along that axis identically one, so
    the support reaches the grid faces on that axis.

    Args:
        grid: Coordinate grid
        windows: Support interval per axis, or None
        amplitude: Overall factor

    Returns:
        Nodal test function
    """
    if len(windows) != grid.dim:
        raise ArgumentError("One window per axis is required", {"dim": grid.dim, "windows": len(windows)})
    phi = np.full(grid.shape, float(amplitude))
    for axis, (window, nodes) in enumerate(zip(windows, grid.axes)):
        if window is None:
            continue
        factor = bump(nodes, *window)
        shape = [1] * grid.dim
        shape[axis] = nodes.size
        phi = phi * factor.reshape(shape)
    return phi

def _face_on_boundary(field: GraphField, axis: int, side: int) -> bool:
    """Whether a grid face is entirely covered by one boundary component."""
    index = [slice(None)] * field.grid.dim
    index[axis] = side
    face = field.coords[tuple(index)]
    tol = 1e-9 * field.grid.h
    return any(np.all(np.abs(comp.level(face)) <= tol) for comp in field.domain.boundary_components)

@dataclass(frozen=True, eq=False)
class IdentityCase:
    """
    A field, a Killing direction and a test function φ.

    φ must vanish on BUMP_MARGIN nodes next to every grid face that is not a
    boundary component of the domain, and outside the closed domain.
    """
    field: GraphField
    killing: KillingField
    test_fn: np.ndarray

    def __post_init__(self):
        phi = np.array(self.test_fn, dtype=float)
        if phi.shape != self.field.grid.shape:
            raise ArgumentError("Test function must be a nodal array on the field's grid",
                                {"phi": phi.shape, "grid": self.field.grid.shape})
        if not np.all(np.isfinite(phi)):
            raise ArgumentError("Test function must be finite")
        self.killing.validate(self.field)

        for axis, n in enumerate(self.field.grid.shape):
            for side in (0, -1):
                if _face_on_boundary(self.field, axis, side):
                    continue
                index = [slice(None)] * self.field.grid.dim
                index[axis] = slice(0, BUMP_MARGIN) if side == 0 else slice(n - BUMP_MARGIN, n)
                if np.max(np.abs(phi[tuple(index)])) > ZERO_TOL:
                    raise ArgumentError("Test function must vanish near free grid faces",
                                        {"axis": axis, "side": side, "margin": BUMP_MARGIN})
        outside = ~self.field.domain_mask(closed=True)
        if np.any(np.abs(phi[outside]) > ZERO_TOL):
            raise ArgumentError("Test function must vanish outside the closed domain")
        phi.setflags(write=False)
        object.__setattr__(self, "test_fn", phi)

    @property
    def dphi(self) -> np.ndarray:
        return gradient(self.test_fn, self.field.spacing)

    def support(self) -> np.ndarray:
        """Nodes where φ does not vanish."""
        return np.abs(self.test_fn) > ZERO_TOL

def graph_volume_weights(field: GraphField, tensors: GraphTensors) -> np.ndarray:
    """
    Trapezoid weights of the graph measure dx_g = W √det σ dx over the closed domain.

    Args:
        field: Graph field
        tensors: Its tensors

    Returns:
        Nodal weights, zero outside the domain
    """
    density = tensors.W * field.domain.base.volume_density(field.coords)
    return field.grid.trapezoid_weights() * density * field.domain_mask(closed=True)

def weighted_volume_weights(field: GraphField, tensors: GraphTensors) -> np.ndarray:
    """Trapezoid weights of dx_W = W^{−2} dx_g."""
    return graph_volume_weights(field, tensors) / tensors.W ** 2

def face_weights(field: GraphField, tensors: GraphTensors, label: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature of the induced graph measure on a grid-aligned boundary component.

    The component is the face {x_axis = const}; its induced measure is
    √det(g restricted to the other coordinates) times the coordinate
    trapezoid weights of the face.

    Args:
        field: Graph field
        tensors: Its tensors
        label: Grid-aligned boundary component

    Returns:
        Tuple of (boundary node mask, nodal weights on the mask)
    """
    if not field.grid_aligned(label):
        raise PreconditionError(f"Boundary component {label} is not a grid face")
    axis = field.domain.component(label).axis()
    mask = field.boundary_mask(label)
    others = [i for i in range(field.grid.dim) if i != axis]

    weights = np.ones(field.grid.shape)
    for i in others:
        n, h = field.grid.shape[i], field.grid.spacing[i]
        w = np.full(n, h)
        w[0] = w[-1] = 0.5 * h
        shape = [1] * field.grid.dim
        shape[i] = n
        weights = weights * w.reshape(shape)

    g_face = tensors.g[mask][:, others][:, :, others]
    density = np.sqrt(np.linalg.det(g_face))
    return mask, weights[mask] * density

def require_support_inside(case: IdentityCase, label: str, margin: int = 2) -> None:
    """
    Raise unless φ vanishes near a boundary component that is not a grid face.

    Args:
        case: Identity case
        label: Boundary component
        margin: Distance in nodes, as multiples of the largest spacing
    """
    comp = case.field.domain.component(label)
    near = np.abs(comp.level(case.field.coords)) <= margin * case.field.grid.h
    if np.any(np.abs(case.test_fn[near]) > ZERO_TOL):
        raise PreconditionError(
            f"Test function meets the curved boundary component {label}; only grid faces are integrated",
            {"label": label},
        )
