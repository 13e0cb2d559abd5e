"""
Tilted Profile Module

Capillary solutions over regions bounded by affine graphs τ = a₀s + a₁ in
the (τ, s) plane: epigraphs (minimal, u = b − c·t) and slabs between two
parallel graphs (any H), where t = (τ − a₀s − a₁)/√(1+a₀²) is the distance
to the lower boundary line.
"""

import math
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from geometry.base_metric import EuclideanMetric
from geometry.model_domain import ModelDomain
from profiles.capillary_profile import CapillaryProfile, evaluate_formula
from utils.error_utils import ArgumentError, DomainError

logger = logging.getLogger(__name__)

class TiltVariant(str, Enum):
    EPIGRAPH = "epigraph"
    SLAB = "slab"

@dataclass(frozen=True)
class TiltedProfile:
    """
    Capillary profile composed with the distance to the line τ = a₀s + a₁.

    ``a2`` is the offset of the upper line of the slab variant.
    """
    H: float
    b: float
    c: float
    a0: float
    a1: float
    variant: TiltVariant = TiltVariant.EPIGRAPH
    a2: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "variant", TiltVariant(self.variant))
        profile = self.profile
        if self.variant is TiltVariant.EPIGRAPH:
            if self.H != 0.0:
                raise ArgumentError("Epigraph solutions are minimal (H = 0)", {"H": self.H})
            if self.a2 is not None:
                raise ArgumentError("Epigraphs have no upper line")
        else:
            if self.a2 is None or not self.a2 > self.a1:
                raise ArgumentError("Slab variant needs a2 > a1", {"a1": self.a1, "a2": self.a2})
            width = self.width
            inside = width <= profile.t_max if profile.closed_right_end else width < profile.t_max
            if not inside:
                raise ArgumentError("Slab is wider than the profile's maximal interval",
                                    {"T": width, "t_max": profile.t_max})

    @property
    def profile(self) -> CapillaryProfile:
        return CapillaryProfile(self.H, self.b, self.c)

    @property
    def scale(self) -> float:
        return math.sqrt(1.0 + self.a0 ** 2)

    @property
    def width(self) -> float:
        """Distance between the boundary lines (inf for epigraphs)."""
        if self.a2 is None:
            return math.inf
        return (self.a2 - self.a1) / self.scale

    def distance(self, tau, s) -> np.ndarray:
        """t = (τ − a₀s − a₁)/√(1+a₀²)."""
        return (np.asarray(tau, dtype=float) - self.a0 * np.asarray(s, dtype=float) - self.a1) / self.scale

    def domain(self) -> ModelDomain:
        """The region in the Euclidean (τ, s) plane."""
        base = EuclideanMetric(2)
        if self.variant is TiltVariant.EPIGRAPH:
            return ModelDomain.half_space(base, self.a0, self.a1)
        return ModelDomain.tilted_slab(base, self.a0, self.a1, self.a2)

def _distance_in_region(p: TiltedProfile, tau, s, tol: float = 1e-12) -> np.ndarray:
    t = p.distance(tau, s)
    if np.any(t < -tol) or np.any(t > p.width + tol):
        raise DomainError("Point outside the tilted region",
                          {"t_min": float(np.min(t)), "t_max_sample": float(np.max(t)), "width": p.width})
    return np.clip(t, 0.0, None)

def tilted_eval(p: TiltedProfile, tau, s) -> np.ndarray:
    """
    Evaluate the tilted solution.

    Args:
        p: Tilted profile
        tau: τ coordinate(s)
        s: s coordinate(s)

    Returns:
        u at the given points
    """
    t = _distance_in_region(p, tau, s)
    if p.H == 0.0:
        return p.b - p.c * t
    return np.asarray(evaluate_formula(p.profile, t).u)

def tilted_gradient(p: TiltedProfile, tau, s) -> Tuple[np.ndarray, np.ndarray]:
    """(∂_τ u, ∂_s u) = u'(t)(1, −a₀)/√(1+a₀²)."""
    t = _distance_in_region(p, tau, s)
    du = np.asarray(evaluate_formula(p.profile, t).du)
    return du / p.scale, -p.a0 * du / p.scale

def boundary_normal_derivative(p: TiltedProfile, s) -> Tuple[np.ndarray, np.ndarray]:
    """
    Boundary data on the lower line τ = a₀s + a₁.

    The outward normal is η̄ = (Dφ₁ − ∂_τ)/√(1+|Dφ₁|²) = (−1, a₀)/√(1+a₀²).

    Args:
        p: Tilted profile
        s: s coordinate(s) along the line

    Returns:
        Tuple of (u on the line, ∂_η̄ u on the line)
    """
    s = np.asarray(s, dtype=float)
    tau = p.a0 * s + p.a1
    u = tilted_eval(p, tau, s)
    du_tau, du_s = tilted_gradient(p, tau, s)
    normal = (-du_tau + p.a0 * du_s) / p.scale
    return u, normal
