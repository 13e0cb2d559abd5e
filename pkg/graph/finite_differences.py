"""
Finite Differences Module

Second-order stencils on uniform grids: central differences inside,
one-sided second-order stencils on the grid edges. Arrays are node-first;
derivative indices are appended as trailing axes.
"""

from typing import Sequence

import numpy as np

def gradient(f: np.ndarray, spacing: Sequence[float]) -> np.ndarray:
    """
    First partial derivatives of a nodal field.

    Args:
        f: Field of shape grid_shape
        spacing: Grid spacing per axis

    Returns:
        Array of shape grid_shape + (m,)
    """
    grads = np.gradient(f, *spacing, edge_order=2)
    if f.ndim == 1:
        grads = [grads]
    return np.stack(grads, axis=-1)

def second_derivative(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """
    Pure second derivative along one axis.

    Uses the compact three-point stencil inside and
    (2f_0 − 5f_1 + 4f_2 − f_3)/h² on the edges.
    """
    if f.shape[axis] < 4:
        raise ValueError("Second derivatives need at least 4 nodes per axis")
    out = np.empty_like(f, dtype=float)
    fm = np.moveaxis(f, axis, 0)
    om = np.moveaxis(out, axis, 0)
    h2 = h * h
    om[1:-1] = (fm[2:] - 2.0 * fm[1:-1] + fm[:-2]) / h2
    om[0] = (2.0 * fm[0] - 5.0 * fm[1] + 4.0 * fm[2] - fm[3]) / h2
    om[-1] = (2.0 * fm[-1] - 5.0 * fm[-2] + 4.0 * fm[-3] - fm[-4]) / h2
    return out

def hessian(f: np.ndarray, spacing: Sequence[float]) -> np.ndarray:
    """
    Matrix of second partial derivatives ∂_i∂_j f.

    Args:
        f: Field of shape grid_shape
        spacing: Grid spacing per axis

    Returns:
        Symmetric array of shape grid_shape + (m, m)
    """
    m = f.ndim
    hess = np.empty(f.shape + (m, m), dtype=float)
    first = gradient(f, spacing)
    for i in range(m):
        hess[..., i, i] = second_derivative(f, spacing[i], i)
        for j in range(i + 1, m):
            mixed_ij = np.gradient(first[..., i], spacing[j], axis=j, edge_order=2)
            mixed_ji = np.gradient(first[..., j], spacing[i], axis=i, edge_order=2)
            mixed = 0.5 * (mixed_ij + mixed_ji)
            hess[..., i, j] = mixed
            hess[..., j, i] = mixed
    return hess
