"""
Grid Module

This module defines the uniform coordinate grid and the GraphField snapshot:
a discrete height function u over a model domain.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from geometry.model_domain import ModelDomain
from utils.error_utils import ArgumentError, DataError, EmptyEvaluationError

logger = logging.getLogger(__name__)

# Nodes closer than this to the grid edge are left out of interior statistics.
DEFAULT_MARGIN = 2

@dataclass(frozen=True)
class Grid:
    """Rectangular lattice with uniform spacing per axis."""
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    shape: Tuple[int, ...]

    def __post_init__(self):
        if not (len(self.lower) == len(self.upper) == len(self.shape)):
            raise ArgumentError("Grid bounds and shape must have the same length")
        for lo, hi, n in zip(self.lower, self.upper, self.shape):
            if not hi > lo:
                raise ArgumentError("Grid upper bound must exceed lower bound", {"lower": lo, "upper": hi})
            if n < 5:
                raise ArgumentError("Grid needs at least 5 nodes per axis", {"n": n})

    @classmethod
    def uniform(cls, lower: Sequence[float], upper: Sequence[float], shape: Sequence[int]) -> "Grid":
        return cls(tuple(float(v) for v in lower), tuple(float(v) for v in upper),
                   tuple(int(n) for n in shape))

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple((hi - lo) / (n - 1) for lo, hi, n in zip(self.lower, self.upper, self.shape))

    @property
    def h(self) -> float:
        """Largest spacing."""
        return max(self.spacing)

    @property
    def axes(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.linspace(lo, hi, n) for lo, hi, n in zip(self.lower, self.upper, self.shape))

    @cached_property
    def coords(self) -> np.ndarray:
        """Node coordinates, shape shape + (m,)."""
        coords = np.stack(np.meshgrid(*self.axes, indexing="ij"), axis=-1)
        coords.setflags(write=False)
        return coords

    def margin_mask(self, margin: int = DEFAULT_MARGIN) -> np.ndarray:
        """Nodes at least ``margin`` indices away from every grid edge."""
        mask = np.zeros(self.shape, dtype=bool)
        mask[tuple(slice(margin, n - margin) for n in self.shape)] = True
        return mask

    def trapezoid_weights(self) -> np.ndarray:
        """Tensor-product trapezoid weights of the coordinate measure."""
        weights = np.ones(self.shape, dtype=float)
        for axis, (n, h) in enumerate(zip(self.shape, self.spacing)):
            w = np.full(n, h)
            w[0] = w[-1] = 0.5 * h
            shape = [1] * self.dim
            shape[axis] = n
            weights = weights * w.reshape(shape)
        return weights

    def describe(self) -> Dict[str, object]:
        return {"lower": list(self.lower), "upper": list(self.upper),
                "shape": list(self.shape), "spacing": list(self.spacing)}

@dataclass(frozen=True, eq=False)
class GraphField:
    """
    A discrete height function u over a model domain.

    The grid may extend past the domain (a box around a ball); statistics
    are restricted to nodes of the closed domain.
    """
    domain: ModelDomain
    grid: Grid
    u: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        if u.shape != self.grid.shape:
            raise ArgumentError("Field shape does not match the grid",
                                {"field": u.shape, "grid": self.grid.shape})
        if self.grid.dim != self.domain.base.dim:
            raise ArgumentError("Grid dimension differs from the base dimension",
                                {"grid": self.grid.dim, "base": self.domain.base.dim})
        if not np.all(np.isfinite(u)):
            raise DataError("Field values must be finite at every node")
        self.domain.base.check_chart(self.grid.coords)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @classmethod
    def from_function(cls, domain: ModelDomain, grid: Grid,
                      fn: Callable[[np.ndarray], np.ndarray]) -> "GraphField":
        """
        Sample a function of the coordinates on the grid.

        Args:
            domain: Model domain
            grid: Coordinate grid
            fn: Vectorized function of points of shape (..., m)

        Returns:
            The sampled field
        """
        return cls(domain, grid, np.asarray(fn(grid.coords), dtype=float))

    @property
    def spacing(self) -> Tuple[float, ...]:
        return self.grid.spacing

    @property
    def coords(self) -> np.ndarray:
        return self.grid.coords

    def domain_mask(self, closed: bool = True) -> np.ndarray:
        """Nodes of the (closed) domain."""
        tol = 1e-9 * self.grid.h
        return self.domain.contains(self.coords, closed=closed, tol=tol)

    def interior_mask(self, margin: int = DEFAULT_MARGIN) -> np.ndarray:
        """Nodes of the closed domain at least ``margin`` nodes from the grid edge."""
        return self.grid.margin_mask(margin) & self.domain_mask(closed=True)

    def boundary_mask(self, label: str) -> np.ndarray:
        """Grid nodes lying on a boundary component."""
        comp = self.domain.component(label)
        mask = np.abs(comp.level(self.coords)) <= 1e-9 * self.grid.h
        if not np.any(mask):
            raise EmptyEvaluationError(f"No grid node lies on boundary component {label}")
        return mask

    def boundary_nodes(self, label: str, margin: int = DEFAULT_MARGIN) -> np.ndarray:
        """
        Boundary nodes of a component away from the grid edges.

        Nodes closer than ``margin`` to a grid edge are dropped, except along
        the axis of a grid-aligned component, whose face is the grid edge.

        Args:
            label: Boundary component label
            margin: Node margin kept from the other grid edges

        Returns:
            Boolean mask over the grid
        """
        mask = self.boundary_mask(label)
        aligned_axis = self.domain.component(label).axis() if self.grid_aligned(label) else None
        keep = np.ones(self.grid.shape, dtype=bool)
        for axis, n in enumerate(self.grid.shape):
            if axis == aligned_axis:
                continue
            index = [slice(None)] * self.grid.dim
            index[axis] = slice(0, margin)
            keep[tuple(index)] = False
            index[axis] = slice(n - margin, n)
            keep[tuple(index)] = False
        selected = mask & keep
        if not np.any(selected):
            raise EmptyEvaluationError(f"No boundary node of {label} lies inside the grid margin")
        return selected

    def grid_aligned(self, label: str) -> bool:
        """Whether a boundary component is a face of the grid box."""
        comp = self.domain.component(label)
        axis = comp.axis()
        if axis is None or (comp.spherical and not comp.polar):
            return False
        mask = self.boundary_mask(label)
        face = np.moveaxis(mask, axis, 0)
        return bool(face[0].all() or face[-1].all())

    def to_frame(self, columns: Optional[Dict[str, np.ndarray]] = None) -> pd.DataFrame:
        """
        Flatten the field into a column table.

        Args:
            columns: Extra nodal arrays (W, H_field, residuals)

        Returns:
            DataFrame with x0..x{m-1}, u and the extra columns
        """
        coords = self.coords.reshape(-1, self.grid.dim)
        data = {f"x{i}": coords[:, i] for i in range(self.grid.dim)}
        data["u"] = self.u.reshape(-1)
        for name, values in (columns or {}).items():
            data[name] = np.broadcast_to(values, self.grid.shape).reshape(-1)
        return pd.DataFrame(data)
