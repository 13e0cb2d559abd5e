"""
Capillary Profile Module

This module defines the one-dimensional capillary solutions u(t) of
(u'/√(1+u'²))' = H on a slab {0 < t < T}, with u(0) = b₁ and outward normal
derivative c₁ on {t = 0}:

    H = 0:  u(t) = b₁ − c₁ t
    H ≠ 0:  u(t) = b₁ + (1/H)(1/√(1+c₁²) − √(1 − (Ht − k)²)),  k = c₁/√(1+c₁²)
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from utils.error_utils import ArgumentError, DomainError

logger = logging.getLogger(__name__)

ArrayOrFloat = Union[float, np.ndarray]

@dataclass(frozen=True)
class ProfileValue:
    """Values of a profile at sample points."""
    u: ArrayOrFloat
    du: ArrayOrFloat
    W: ArrayOrFloat

@dataclass(frozen=True)
class CapillaryProfile:
    """
    Analytic capillary profile with constant mean curvature H.

    Sign rules: c₁ < 0 when H = 0, c₁ ≤ 0 when H > 0 and c₁ < 0 when H < 0.
    """
    H: float
    b1: float
    c1: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.H, self.b1, self.c1)):
            raise ArgumentError("Profile parameters must be finite")
        if self.H == 0.0 and self.c1 >= 0.0:
            raise ArgumentError("Minimal profiles need c1 < 0", {"c1": self.c1})
        if self.H > 0.0 and self.c1 > 0.0:
            raise ArgumentError("Profiles with H > 0 need c1 <= 0", {"c1": self.c1})
        if self.H < 0.0 and self.c1 >= 0.0:
            raise ArgumentError("Profiles with H < 0 need c1 < 0", {"c1": self.c1})

    @property
    def k(self) -> float:
        """c₁/√(1+c₁²), the value of −u'/W at t = 0."""
        return self.c1 / math.sqrt(1.0 + self.c1 ** 2)

    @property
    def t_max(self) -> float:
        """Right end of the maximal interval of definition (inf for H = 0)."""
        if self.H == 0.0:
            return math.inf
        if self.H > 0.0:
            return (1.0 + self.k) / self.H
        return abs(self.k) / abs(self.H)

    @property
    def closed_right_end(self) -> bool:
        """Whether t_max itself belongs to the domain (finite slope there)."""
        return self.H < 0.0

    @property
    def gamma(self) -> float:
        """Contact angle γ with tan γ = |c₁|."""
        return math.atan(abs(self.c1))

    def to_dict(self) -> dict:
        return {"H": self.H, "b1": self.b1, "c1": self.c1,
                "t_max": self.t_max, "gamma": self.gamma}

def evaluate_formula(p: CapillaryProfile, t: ArrayOrFloat) -> ProfileValue:
    """
    Evaluate the closed form without domain checks.

    Valid wherever the radicand 1 − (Ht − k)² is positive.
    """
    t = np.asarray(t, dtype=float)
    if p.H == 0.0:
        u = p.b1 - p.c1 * t
        du = np.full_like(t, -p.c1)
    else:
        w = p.H * t - p.k
        root = np.sqrt(1.0 - w * w)
        u = p.b1 + (math.sqrt(1.0 - p.k ** 2) - root) / p.H
        du = w / root
    W = np.sqrt(1.0 + du * du)
    if u.ndim == 0:
        return ProfileValue(float(u), float(du), float(W))
    return ProfileValue(u, du, W)

def profile_eval(p: CapillaryProfile, t: ArrayOrFloat) -> ProfileValue:
    """
    Evaluate u, u' and W = √(1+u'²) of a profile.

    Args:
        p: Capillary profile
        t: Sample point(s) in [0, t_max) ([0, t_max] when H < 0)

    Returns:
        ProfileValue
    """
    ts = np.asarray(t, dtype=float)
    upper_ok = ts <= p.t_max if p.closed_right_end else ts < p.t_max
    if np.any(ts < 0.0) or not np.all(upper_ok):
        raise DomainError("Profile evaluated outside [0, t_max)",
                          {"t_min": float(np.min(ts)), "t_max_sample": float(np.max(ts)), "t_max": p.t_max})
    return evaluate_formula(p, t)

def sample_end(p: CapillaryProfile, t_cap: float = 1.0) -> float:
    """Right end 0.999·min(t_max, T_cap) of the sampling window."""
    return 0.999 * min(p.t_max, t_cap)

def profile_residual(p: CapillaryProfile, n_samples: int, t_cap: float = 1.0) -> float:
    """
    Max residual of (u'/√(1+u'²))' − H on [0, 0.999·min(t_max, T_cap)].

    The derivative of u'/W is taken by the five-point central stencil of the
    closed form, whose formula extends slightly past both ends of the window.

    Args:
        p: Capillary profile
        n_samples: Number of uniform samples (>= 2)
        t_cap: Cap T_cap for unbounded profiles

    Returns:
        Max absolute residual
    """
    if n_samples < 2:
        raise ArgumentError("n_samples must be >= 2", {"n_samples": n_samples})
    if p.H == 0.0:
        return 0.0
    end = sample_end(p, t_cap)
    t = np.linspace(0.0, end, n_samples)
    delta = 1e-4 * end

    def flux(s):
        value = evaluate_formula(p, s)
        return value.du / value.W

    derivative = (-flux(t + 2 * delta) + 8 * flux(t + delta)
                  - 8 * flux(t - delta) + flux(t - 2 * delta)) / (12 * delta)
    residual = float(np.max(np.abs(derivative - p.H)))
    logger.debug(f"Profile residual for {p}: {residual:.3e} over {n_samples} samples")
    return residual

def profile_table(p: CapillaryProfile, n_samples: int, t_cap: float = 1.0,
                  C: float = 0.0, t_end: Optional[float] = None) -> Tuple[np.ndarray, ProfileValue, np.ndarray]:
    """
    Sample a profile for output: t, values and z = W e^{−Cu}.

    Args:
        p: Capillary profile
        n_samples: Number of samples
        t_cap: Cap for unbounded profiles
        C: Exponent of z
        t_end: Explicit right end; default 0.999·min(t_max, T_cap)

    Returns:
        Tuple of (t, values, z)
    """
    end = sample_end(p, t_cap) if t_end is None else t_end
    t = np.linspace(0.0, end, n_samples)
    value = profile_eval(p, t)
    z = value.W * np.exp(-C * value.u)
    return t, value, z
