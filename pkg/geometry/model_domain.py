"""
Model Domain Module

This module defines the model domains Ω of the base manifold: slabs, balls,
strips in the plane and (possibly tilted) half-spaces, together with their
labeled boundary components and outward normals.
"""

import math
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Optional

import numpy as np

from geometry.base_metric import BaseMetric, EuclideanMetric, MetricKind
from utils.error_utils import ArgumentError, DomainError

logger = logging.getLogger(__name__)

class DomainShape(str, Enum):
    """Shapes of the model domains."""
    SLAB = "slab"
    BALL = "ball"
    STRIP = "strip"
    HALF_SPACE = "half_space"

@dataclass(frozen=True)
class BoundaryComponent:
    """
    A boundary piece {level = 0} of a model domain, the domain being {level < 0}.

    Planar components use level(x) = ⟨normal, x⟩ − offset with a constant
    outward covector; spherical components use level(x) = |x| − radius in
    Cartesian coordinates or r − radius in a polar chart.
    """
    label: str
    normal: Tuple[float, ...] = ()
    offset: float = 0.0
    radius: Optional[float] = None
    polar: bool = False

    @property
    def spherical(self) -> bool:
        return self.radius is not None

    def level(self, coords: np.ndarray) -> np.ndarray:
        """Signed level function, negative inside the domain."""
        x = np.asarray(coords, dtype=float)
        if self.spherical:
            if self.polar:
                return x[..., 0] - self.radius
            return np.linalg.norm(x, axis=-1) - self.radius
        return x @ np.asarray(self.normal, dtype=float) - self.offset

    def outward_covector(self, coords: np.ndarray) -> np.ndarray:
        """
        Outward conormal covector d(level) at the given points.

        Args:
            coords: Points of shape (..., m)

        Returns:
            Covectors of shape (..., m); unit for the flat metric and for
            the radial direction of polar charts
        """
        x = np.asarray(coords, dtype=float)
        if self.spherical:
            if self.polar:
                out = np.zeros_like(x)
                out[..., 0] = 1.0
                return out
            norm = np.linalg.norm(x, axis=-1, keepdims=True)
            if np.any(norm == 0.0):
                raise DomainError("Outward normal of a sphere undefined at its center")
            return x / norm
        return np.broadcast_to(np.asarray(self.normal, dtype=float), x.shape).copy()

    def axis(self) -> Optional[int]:
        """Coordinate axis the component is a level set of, if any."""
        if self.spherical:
            return 0 if self.polar else None
        nonzero = [i for i, c in enumerate(self.normal) if c != 0.0]
        return nonzero[0] if len(nonzero) == 1 else None

class ModelDomain:
    """
    A model domain Ω in a base manifold with its boundary components.
    """

    def __init__(self, base: BaseMetric, shape: DomainShape, extent: float,
                 boundary_components: Tuple[BoundaryComponent, ...]):
        """
        Initialize a model domain. Use the classmethod constructors.

        Args:
            base: Base metric
            shape: Domain shape
            extent: Width T of slabs and strips, radius R of balls, inf for half-spaces
            boundary_components: Labeled boundary pieces
        """
        self.base = base
        try:
            self.shape = DomainShape(shape)
        except ValueError:
            raise ArgumentError(f"Unknown domain shape: {shape}", {"allowed": [s.value for s in DomainShape]})
        self.extent = float(extent)
        self.boundary_components = tuple(boundary_components)

    def __repr__(self) -> str:
        return f"ModelDomain(shape={self.shape.value}, extent={self.extent}, base={self.base!r})"

    @classmethod
    def slab(cls, base: BaseMetric, width: float = math.inf) -> "ModelDomain":
        """
        Slab (0, T) × N in the coordinate t = x_0; a half-slab when T is infinite.

        Args:
            base: Euclidean or product-line base
            width: T > 0, possibly infinite

        Returns:
            The slab domain
        """
        if base.kind is MetricKind.HYPERBOLIC:
            raise ArgumentError("Slabs are defined on flat bases only")
        if not width > 0.0:
            raise ArgumentError("Slab width must be positive", {"T": width})
        m = base.dim
        lower = BoundaryComponent("t=0", normal=tuple([-1.0] + [0.0] * (m - 1)), offset=0.0)
        components = [lower]
        if math.isfinite(width):
            components.append(
                BoundaryComponent("t=T", normal=tuple([1.0] + [0.0] * (m - 1)), offset=width)
            )
        return cls(base, DomainShape.SLAB, width, tuple(components))

    @classmethod
    def strip(cls, width: float) -> "ModelDomain":
        """Strip (0, T) × ℝ in the Euclidean plane."""
        domain = cls.slab(EuclideanMetric(2), width)
        return cls(domain.base, DomainShape.STRIP, width, domain.boundary_components)

    @classmethod
    def ball(cls, base: BaseMetric, radius: float) -> "ModelDomain":
        """
        Geodesic ball of radius R about the origin (Cartesian for flat bases, polar for hyperbolic).

        Args:
            base: Base metric
            radius: R > 0

        Returns:
            The ball domain
        """
        if not (radius > 0.0 and math.isfinite(radius)):
            raise ArgumentError("Ball radius must be positive and finite", {"R": radius})
        polar = base.kind is MetricKind.HYPERBOLIC
        sphere = BoundaryComponent("r=R", radius=radius, polar=polar)
        return cls(base, DomainShape.BALL, radius, (sphere,))

    @classmethod
    def half_space(cls, base: BaseMetric, slope: float = 0.0, offset: float = 0.0) -> "ModelDomain":
        """
        Epigraph {x_0 > a0 x_1 + a1} of an affine function; {x_0 > a1} when a0 = 0.

        Args:
            base: Flat base
            slope: a0
            offset: a1

        Returns:
            The half-space domain
        """
        if base.kind is MetricKind.HYPERBOLIC:
            raise ArgumentError("Half-spaces are defined on flat bases only")
        m = base.dim
        scale = math.sqrt(1.0 + slope ** 2)
        normal = [-1.0 / scale, slope / scale] + [0.0] * (m - 2)
        component = BoundaryComponent("graph", normal=tuple(normal), offset=-offset / scale)
        return cls(base, DomainShape.HALF_SPACE, math.inf, (component,))

    @classmethod
    def tilted_slab(cls, base: BaseMetric, slope: float, lower: float, upper: float) -> "ModelDomain":
        """
        Region a0 x_1 + a1 < x_0 < a0 x_1 + a2 between two parallel affine graphs.

        Args:
            base: Flat base
            slope: a0
            lower: a1
            upper: a2 > a1

        Returns:
            The slab domain; its extent is the distance (a2 − a1)/√(1 + a0²)
        """
        if not upper > lower:
            raise ArgumentError("Tilted slab needs upper offset > lower offset",
                                {"a1": lower, "a2": upper})
        bottom = cls.half_space(base, slope, lower).boundary_components[0]
        m = base.dim
        scale = math.sqrt(1.0 + slope ** 2)
        top = BoundaryComponent(
            "graph_upper",
            normal=tuple([1.0 / scale, -slope / scale] + [0.0] * (m - 2)),
            offset=upper / scale,
        )
        return cls(base, DomainShape.SLAB, (upper - lower) / scale, (bottom, top))

    def component(self, label: str) -> BoundaryComponent:
        """Look up a boundary component by label."""
        for comp in self.boundary_components:
            if comp.label == label:
                return comp
        raise ArgumentError(f"Unknown boundary component: {label}",
                            {"labels": [c.label for c in self.boundary_components]})

    def level(self, coords: np.ndarray) -> np.ndarray:
        """Maximum of the component levels; negative exactly in the open domain."""
        levels = [comp.level(coords) for comp in self.boundary_components]
        return np.max(np.stack(levels, axis=0), axis=0)

    def contains(self, coords: np.ndarray, closed: bool = True, tol: float = 1e-12) -> np.ndarray:
        """
        Membership mask of points in Ω (or its closure).

        Args:
            coords: Points of shape (..., m)
            closed: Include the boundary
            tol: Slack for boundary points

        Returns:
            Boolean array of shape (...)
        """
        level = self.level(coords)
        return level <= tol if closed else level < -tol

    def outward_normal(self, label: str, coords: np.ndarray) -> np.ndarray:
        """
        Unit outward normal vector η̄ of a component, w.r.t. σ.

        Args:
            label: Component label
            coords: Points on the component

        Returns:
            Vectors of shape (..., m)
        """
        comp = self.component(label)
        covector = comp.outward_covector(coords)
        sigma_inv = self.base.inverse_metric_field(coords)
        vector = np.einsum("...ij,...j->...i", sigma_inv, covector)
        norm = np.sqrt(np.einsum("...i,...i->...", vector, covector))
        return vector / norm[..., None]

    def describe(self) -> dict:
        """Short description used in reports."""
        return {
            "shape": self.shape.value,
            "extent": self.extent,
            "base": self.base.describe(),
            "boundary": [c.label for c in self.boundary_components],
        }
