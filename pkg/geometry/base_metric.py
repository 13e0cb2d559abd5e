"""
Base Metric Module

This module defines the BaseMetric class hierarchy for the model base
manifolds (M, σ): Euclidean space, hyperbolic space in polar coordinates and
flat products I × N. Every metric evaluates σ_ij and γ^k_ij on arrays of
coordinate points of shape (..., m).
"""

import logging
from enum import Enum
from typing import Tuple, Union

import numpy as np

from utils.error_utils import ArgumentError, DomainError

logger = logging.getLogger(__name__)

# Polar charts exclude the pole and the axis of the angular coordinates.
CHART_CUTOFF = 1e-8

ArrayLike = Union[np.ndarray, Tuple[float, ...], list]

class MetricKind(str, Enum):
    """Model kinds of the base manifold."""
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"
    PRODUCT_LINE = "product_line"

def warp(kappa: float, r: np.ndarray) -> np.ndarray:
    """Radial warping function: r on flat bases, sinh(κr)/κ on hyperbolic ones."""
    r = np.asarray(r, dtype=float)
    if kappa == 0.0:
        return r
    return np.sinh(kappa * r) / kappa

def warp_derivative(kappa: float, r: np.ndarray) -> np.ndarray:
    """Derivative of :func:`warp` in r."""
    r = np.asarray(r, dtype=float)
    if kappa == 0.0:
        return np.ones_like(r)
    return np.cosh(kappa * r)

class BaseMetric:
    """
    Base class for the coordinate metrics of the model manifolds.

    Subclasses implement the diagonal entries of σ and their logarithmic
    derivatives; Christoffel symbols follow from those in closed form.
    """

    kind: MetricKind = MetricKind.EUCLIDEAN

    def __init__(self, dim: int, curvature: float = 0.0):
        """
        Initialize a base metric.

        Args:
            dim: Manifold dimension m (at least 2)
            curvature: κ ≥ 0, sectional curvature is −κ² for hyperbolic bases
        """
        if int(dim) != dim or dim < 2:
            raise ArgumentError("Manifold dimension must be an integer m >= 2", {"dim": dim})
        if curvature < 0.0:
            raise ArgumentError("Curvature parameter kappa must be >= 0", {"kappa": curvature})
        self.dim = int(dim)
        self.curvature = float(curvature)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(dim={self.dim}, curvature={self.curvature})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BaseMetric)
            and self.kind == other.kind
            and self.dim == other.dim
            and self.curvature == other.curvature
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.dim, self.curvature))

    @property
    def ricci_lower_bound(self) -> float:
        """κ such that Ric ≥ −(m−1)κ² on the whole model."""
        return 0.0

    def describe(self) -> dict:
        """Short description used in reports."""
        return {"kind": self.kind.value, "dim": self.dim, "kappa": self.curvature}

    def _coords(self, coords: ArrayLike) -> np.ndarray:
        x = np.asarray(coords, dtype=float)
        if x.shape[-1] != self.dim:
            raise DomainError(
                "Coordinate points must have the manifold dimension as last axis",
                {"expected": self.dim, "got": x.shape[-1]},
            )
        return x

    def check_chart(self, coords: ArrayLike) -> np.ndarray:
        """
        Validate that all points lie in the chart.

        Args:
            coords: Points of shape (..., m)

        Returns:
            The points as a float array
        """
        return self._coords(coords)

    def diagonal(self, coords: np.ndarray) -> np.ndarray:
        """Diagonal entries σ_ii, shape (..., m)."""
        return np.ones(coords.shape, dtype=float)

    def log_derivatives(self, coords: np.ndarray) -> np.ndarray:
        """∂_j log σ_ii as an array of shape (..., m[i], m[j])."""
        return np.zeros(coords.shape + (self.dim,), dtype=float)

    def metric_field(self, coords: ArrayLike) -> np.ndarray:
        """
        Evaluate σ_ij on an array of points.

        Args:
            coords: Points of shape (..., m)

        Returns:
            Array of shape (..., m, m)
        """
        x = self.check_chart(coords)
        diag = self.diagonal(x)
        sigma = np.zeros(x.shape + (self.dim,), dtype=float)
        idx = np.arange(self.dim)
        sigma[..., idx, idx] = diag
        return sigma

    def inverse_metric_field(self, coords: ArrayLike) -> np.ndarray:
        """σ^ij on an array of points."""
        x = self.check_chart(coords)
        diag = self.diagonal(x)
        sigma_inv = np.zeros(x.shape + (self.dim,), dtype=float)
        idx = np.arange(self.dim)
        sigma_inv[..., idx, idx] = 1.0 / diag
        return sigma_inv

    def volume_density(self, coords: ArrayLike) -> np.ndarray:
        """√det σ on an array of points."""
        x = self.check_chart(coords)
        return np.sqrt(np.prod(self.diagonal(x), axis=-1))

    def christoffel_field(self, coords: ArrayLike) -> np.ndarray:
        """
        Evaluate γ^k_ij on an array of points.

        For a diagonal metric the only nonzero symbols are
        γ^i_ij = γ^i_ji = ½ ∂_j log σ_ii and γ^j_ii = −½ σ_ii ∂_j log σ_ii / σ_jj.

        Args:
            coords: Points of shape (..., m)

        Returns:
            Array of shape (..., m[k], m[i], m[j])
        """
        x = self.check_chart(coords)
        m = self.dim
        gamma = np.zeros(x.shape[:-1] + (m, m, m), dtype=float)
        if not np.any(self.log_derivatives(x)):
            return gamma
        diag = self.diagonal(x)
        dlog = self.log_derivatives(x)
        for i in range(m):
            for j in range(m):
                if i == j:
                    gamma[..., i, i, i] = 0.5 * dlog[..., i, i]
                    continue
                gamma[..., i, i, j] = 0.5 * dlog[..., i, j]
                gamma[..., i, j, i] = 0.5 * dlog[..., i, j]
                gamma[..., j, i, i] = -0.5 * diag[..., i] * dlog[..., i, j] / diag[..., j]
        return gamma

    def metric_at(self, point: ArrayLike) -> np.ndarray:
        """σ_ij at a single point."""
        return self.metric_field(np.asarray(point, dtype=float))

    def christoffel_at(self, point: ArrayLike) -> np.ndarray:
        """γ^k_ij at a single point."""
        return self.christoffel_field(np.asarray(point, dtype=float))

    def ricci_normal(self, du_norm_sq: np.ndarray, W: np.ndarray) -> np.ndarray:
        """
        Closed-form Ric̄(n, n) = Ric(Du, Du)/W² of the graph normal.

        Args:
            du_norm_sq: |Du|²_σ per node
            W: Area element per node

        Returns:
            Ric̄(n, n) per node
        """
        return np.zeros_like(np.asarray(W, dtype=float))

    def ricci_normal_bound(self, du_norm_sq: np.ndarray, W: np.ndarray) -> np.ndarray:
        """Lower bound −(m−1)κ²|Du|²/W² of Ric̄(n, n) implied by ricci_lower_bound."""
        kappa = self.ricci_lower_bound
        return -(self.dim - 1) * kappa ** 2 * np.asarray(du_norm_sq) / np.asarray(W) ** 2

    def is_killing_axis(self, axis: int) -> bool:
        """Whether the coordinate field ∂_axis is a Killing field of σ."""
        return 0 <= axis < self.dim

class EuclideanMetric(BaseMetric):
    """Flat ℝ^m in Cartesian coordinates."""

    kind = MetricKind.EUCLIDEAN

class ProductLineMetric(BaseMetric):
    """Flat product I × N in coordinates (t, x), N flat."""

    kind = MetricKind.PRODUCT_LINE

class HyperbolicMetric(BaseMetric):
    """
    Hyperbolic space of curvature −κ² in polar coordinates (r, θ_1, ..., θ_{m−1}).

    σ = dr² + S(r)² g_sphere with S(r) = sinh(κr)/κ and the round metric
    diag(1, sin²θ_1, sin²θ_1 sin²θ_2, ...).
    """

    kind = MetricKind.HYPERBOLIC

    def __init__(self, dim: int, curvature: float):
        super().__init__(dim, curvature)
        if curvature <= 0.0:
            raise ArgumentError("Hyperbolic bases need kappa > 0", {"kappa": curvature})

    @property
    def ricci_lower_bound(self) -> float:
        return self.curvature

    def check_chart(self, coords: ArrayLike) -> np.ndarray:
        x = self._coords(coords)
        r = x[..., 0]
        if np.any(~np.isfinite(x)) or np.any(r < CHART_CUTOFF):
            raise DomainError(
                "Point outside the polar chart (r must be >= cutoff)",
                {"cutoff": CHART_CUTOFF, "min_r": float(np.min(r))},
            )
        if self.dim > 2:
            sines = np.sin(x[..., 1:self.dim - 1])
            if np.any(sines < CHART_CUTOFF):
                raise DomainError("Point on the axis of the polar chart (sin(theta) must be > 0)")
        return x

    def diagonal(self, coords: np.ndarray) -> np.ndarray:
        r = coords[..., 0]
        s2 = warp(self.curvature, r) ** 2
        diag = np.empty(coords.shape, dtype=float)
        diag[..., 0] = 1.0
        factor = s2
        for i in range(1, self.dim):
            diag[..., i] = factor
            factor = factor * np.sin(coords[..., i]) ** 2
        return diag

    def log_derivatives(self, coords: np.ndarray) -> np.ndarray:
        m = self.dim
        r = coords[..., 0]
        kappa = self.curvature
        dlog = np.zeros(coords.shape + (m,), dtype=float)
        radial = 2.0 * kappa / np.tanh(kappa * r)
        for i in range(1, m):
            dlog[..., i, 0] = radial
            for l in range(1, i):
                dlog[..., i, l] = 2.0 / np.tan(coords[..., l])
        return dlog

    def ricci_normal(self, du_norm_sq: np.ndarray, W: np.ndarray) -> np.ndarray:
        # Space form: Ric = −(m−1)κ² σ, so the bound is attained.
        return self.ricci_normal_bound(du_norm_sq, W)

    def is_killing_axis(self, axis: int) -> bool:
        # Only the last angle is a rotation about a fixed axis.
        return axis == self.dim - 1

def make_metric(kind: Union[str, MetricKind], dim: int, curvature: float = 0.0) -> BaseMetric:
    """
    Build a base metric from its kind label.

    Args:
        kind: "euclidean", "hyperbolic" or "product_line"
        dim: Manifold dimension
        curvature: κ (used by hyperbolic bases)

    Returns:
        The metric instance
    """
    try:
        kind = MetricKind(kind)
    except ValueError:
        raise ArgumentError(f"Unknown metric kind: {kind}", {"allowed": [k.value for k in MetricKind]})
    if kind is MetricKind.HYPERBOLIC:
        return HyperbolicMetric(dim, curvature)
    if kind is MetricKind.PRODUCT_LINE:
        return ProductLineMetric(dim)
    return EuclideanMetric(dim)

def metric_eval(metric: BaseMetric, point: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluate σ_ij and γ^k_ij at a point.

    Args:
        metric: Base metric
        point: Coordinate tuple in the chart

    Returns:
        Tuple of (σ matrix, γ array indexed [k, i, j])
    """
    return metric.metric_at(point), metric.christoffel_at(point)
