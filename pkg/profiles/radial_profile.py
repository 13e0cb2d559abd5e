"""
Radial Profile Module

Rotationally symmetric CMC graphs u(r) over Euclidean space or hyperbolic
space of curvature −κ². With S(r) = r or sinh(κr)/κ the equation
(S^{m−1} u'/W)' = H S^{m−1} integrates to

    u'/W = H f(r),    f(r) = S(r)^{1−m} ∫₀^r S^{m−1},

so the graph exists while |H| f < 1. On hyperbolic space f increases to
1/((m−1)κ), hence the graph is entire exactly when |H| ≤ (m−1)κ. On flat
space f = r/m and the graph is the spherical cap u = m/H − √(m²/H² − r²).
"""

import math
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import integrate, optimize

from profiles.capillary_profile import ProfileValue
from utils.error_utils import ArgumentError, DomainError

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class RadialProfile:
    """Radial CMC graph with u(0) = u0."""
    m: int
    kappa: float
    H: float
    u0: float = 0.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ArgumentError("Dimension m must be an integer >= 2", {"m": self.m})
        if self.kappa < 0.0:
            raise ArgumentError("kappa must be >= 0", {"kappa": self.kappa})

    @property
    def entire(self) -> bool:
        """Whether the graph is defined over the whole space."""
        if self.H == 0.0:
            return True
        return self.kappa > 0.0 and abs(self.H) <= (self.m - 1) * self.kappa

    @property
    def r_max(self) -> float:
        """Radius where the slope blows up (inf for entire graphs)."""
        if self.entire:
            return math.inf
        if self.kappa == 0.0:
            return self.m / abs(self.H)
        target = 1.0 / abs(self.H)
        upper = 1.0
        while mean_ratio(self.m, self.kappa, upper) < target:
            upper *= 2.0
        return float(optimize.brentq(lambda r: mean_ratio(self.m, self.kappa, r) - target,
                                     1e-12, upper, xtol=1e-14, rtol=1e-14))

def mean_ratio(m: int, kappa: float, r: float) -> float:
    """f(r) = S(r)^{1−m} ∫₀^r S^{m−1}, the volume-to-area ratio of the geodesic ball."""
    if r <= 0.0:
        return 0.0
    if kappa == 0.0:
        return r / m
    # Rescaled by sinh(κr) to stay finite for large radii.
    scale = math.sinh(kappa * r)
    integral, _ = integrate.quad(lambda s: (math.sinh(kappa * s) / scale) ** (m - 1), 0.0, r,
                                 epsabs=1e-15, epsrel=1e-13, limit=200)
    return integral

def radial_slope(p: RadialProfile, r: np.ndarray) -> np.ndarray:
    """u'(r) = H f / √(1 − H² f²)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    f = np.array([mean_ratio(p.m, p.kappa, ri) for ri in r])
    hf = p.H * f
    return hf / np.sqrt(1.0 - hf * hf)

def radial_eval(p: RadialProfile, r) -> ProfileValue:
    """
    Evaluate u, u' and W at radii in [0, r_max).

    Args:
        p: Radial profile
        r: Radius or array of radii

    Returns:
        ProfileValue with arrays shaped like r
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0) or np.any(r_arr >= p.r_max):
        raise DomainError("Radius outside [0, r_max)", {"r_max": p.r_max})
    flat = r_arr.reshape(-1)

    if p.kappa == 0.0:
        if p.H == 0.0:
            u = np.full_like(flat, p.u0)
            du = np.zeros_like(flat)
        else:
            ratio = p.H * flat / p.m
            root = np.sqrt(1.0 - ratio * ratio)
            u = p.u0 + (p.m / p.H) * (1.0 - root)
            du = ratio / root
    else:
        order = np.argsort(flat)
        sorted_r = flat[order]
        du_sorted = radial_slope(p, sorted_r)
        increments = np.empty_like(sorted_r)
        previous = 0.0
        for i, ri in enumerate(sorted_r):
            piece, _ = integrate.quad(lambda s: float(radial_slope(p, s)[0]), previous, ri,
                                      epsabs=1e-14, epsrel=1e-12)
            increments[i] = piece
            previous = ri
        u_sorted = p.u0 + np.cumsum(increments)
        u = np.empty_like(flat)
        du = np.empty_like(flat)
        u[order] = u_sorted
        du[order] = du_sorted

    W = np.sqrt(1.0 + du * du)
    shape = r_arr.shape
    if not shape:
        return ProfileValue(float(u[0]), float(du[0]), float(W[0]))
    return ProfileValue(u.reshape(shape), du.reshape(shape), W.reshape(shape))

def radial_z_profile(p: RadialProfile, C: float, r_end: float,
                     n_samples: int = 401) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Sample z = W e^{−Cu} on [0, r_end] and locate its maximum.

    On hyperbolic space with 0 < H ≤ (m−1)κ and C < H/m, z increases
    near the origin, z − 1 ≈ (H²/m² − CH/m) r²/2, so the maximum over a
    ball need not sit on its boundary.

    Args:
        p: Radial profile
        C: Exponent
        r_end: Right end of the window
        n_samples: Number of samples

    Returns:
        Tuple of (r, z, radius of the maximum)
    """
    r = np.linspace(0.0, r_end, n_samples)
    value = radial_eval(p, r)
    z = value.W * np.exp(-C * value.u)
    return r, z, float(r[int(np.argmax(z))])
