"""
Parabolicity Module

This module provides the sufficient volume-growth criteria for parabolicity
of a domain, in surface form ∫^∞ ds/|Ω ∩ ∂B_s| = ∞ and volume form
∫^∞ s ds/|Ω ∩ B_s| = ∞, and growth functions of the model domains.
"""

import math
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Any

import numpy as np
from scipy import integrate, special

from geometry.base_metric import MetricKind, warp
from geometry.model_domain import ModelDomain, DomainShape
from utils.error_utils import ArgumentError, DataError

logger = logging.getLogger(__name__)

class GrowthMode(str, Enum):
    SURFACE = "surface"
    VOLUME = "volume"

    @classmethod
    def parse(cls, mode) -> "GrowthMode":
        try:
            return cls(mode)
        except ValueError:
            raise ArgumentError(f"Unknown growth mode: {mode}", {"allowed": [m.value for m in cls]})

class ParabolicityVerdict(str, Enum):
    CRITERION_SATISFIED = "criterion_satisfied"
    CRITERION_NOT_SATISFIED = "criterion_not_satisfied"

# Borderline exponent of the growth for each mode.
THRESHOLDS = {GrowthMode.SURFACE: 1.0, GrowthMode.VOLUME: 2.0}

@dataclass(frozen=True)
class ParabolicityResult:
    """Outcome of a volume-growth test."""
    verdict: ParabolicityVerdict
    integral: float
    tail_exponent: float
    threshold: float
    mode: GrowthMode
    s0: float
    s_max: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "integral": self.integral,
            "tail_exponent": self.tail_exponent,
            "threshold": self.threshold,
            "mode": self.mode.value,
            "s0": self.s0,
            "s_max": self.s_max,
        }

def parabolicity_criterion(
    domain: ModelDomain,
    growth: Callable[[np.ndarray], np.ndarray],
    mode: str,
    s_max: float,
    s0: float = 1.0,
    n_samples: int = 4001,
    fit_tol: float = 0.05,
) -> ParabolicityResult:
    """
    Test the volume-growth criterion on [s0, s_max].

    The partial integral of 1/growth (surface mode) or s/growth (volume
    mode) is computed by the trapezoid rule on a geometric grid, and the
    growth exponent p is fitted on the last decade of samples. The criterion
    is reported satisfied when p does not exceed the borderline exponent by
    more than ``fit_tol``.

    Args:
        domain: Domain the growth function describes (recorded in logs)
        growth: Vectorized s ↦ |Ω ∩ ∂B_s| or s ↦ |Ω ∩ B_s|
        mode: "surface" or "volume"
        s_max: Upper end of the window
        s0: Lower end of the window
        n_samples: Number of geometric samples
        fit_tol: Tolerance on the fitted exponent

    Returns:
        ParabolicityResult with verdict, partial integral and fitted exponent
    """
    mode = GrowthMode.parse(mode)
    if not (0.0 < s0 < s_max):
        raise ArgumentError("Need 0 < s0 < s_max", {"s0": s0, "s_max": s_max})
    if s_max < 10.0 * s0:
        raise ArgumentError("The window must span at least one decade", {"s0": s0, "s_max": s_max})

    s = np.geomspace(s0, s_max, n_samples)
    g = np.asarray(growth(s), dtype=float)
    if g.shape != s.shape or not np.all(np.isfinite(g)) or np.any(g <= 0.0):
        raise DataError("Growth samples must be finite and positive on [s0, s_max]",
                        {"min": float(np.nanmin(g)) if g.size else None})

    integrand = 1.0 / g if mode is GrowthMode.SURFACE else s / g
    integral = float(integrate.trapezoid(integrand, s))

    tail = s >= s_max / 10.0
    p, _ = np.polyfit(np.log(s[tail]), np.log(g[tail]), 1)
    threshold = THRESHOLDS[mode]
    satisfied = p <= threshold + fit_tol
    verdict = (ParabolicityVerdict.CRITERION_SATISFIED if satisfied
               else ParabolicityVerdict.CRITERION_NOT_SATISFIED)

    logger.info(
        f"Parabolicity ({mode.value}) on {domain.shape.value}: exponent {p:.4f} "
        f"vs {threshold}, integral {integral:.6g} -> {verdict.value}"
    )
    return ParabolicityResult(verdict, integral, float(p), threshold, mode, s0, s_max)

def unit_ball_volume(m: int) -> float:
    """Volume ω_m of the unit ball in ℝ^m."""
    return math.pi ** (m / 2.0) / special.gamma(m / 2.0 + 1.0)

def model_growth(domain: ModelDomain, mode: str) -> Callable[[np.ndarray], np.ndarray]:
    """
    Growth function of a model domain for balls centered at the origin.

    Supported: flat half-spaces (half the Euclidean ball growth, balls
    centered on the boundary), flat slabs of width T (balls centered on the
    mid-plane) and hyperbolic space.

    Args:
        domain: Model domain
        mode: "surface" or "volume"

    Returns:
        Vectorized growth function of s
    """
    mode = GrowthMode.parse(mode)
    base = domain.base
    m = base.dim
    omega = unit_ball_volume(m)

    if base.kind is MetricKind.HYPERBOLIC:
        kappa = base.curvature
        area = m * omega

        def sphere(s):
            return area * warp(kappa, s) ** (m - 1)

        def ball(s):
            s = np.atleast_1d(np.asarray(s, dtype=float))
            values = [integrate.quad(lambda r: warp(kappa, r) ** (m - 1), 0.0, si)[0] for si in s]
            return area * np.asarray(values)

        return sphere if mode is GrowthMode.SURFACE else ball

    if domain.shape is DomainShape.HALF_SPACE:
        if mode is GrowthMode.SURFACE:
            return lambda s: 0.5 * m * omega * np.asarray(s, dtype=float) ** (m - 1)
        return lambda s: 0.5 * omega * np.asarray(s, dtype=float) ** m

    if domain.shape in (DomainShape.SLAB, DomainShape.STRIP):
        half = 0.5 * domain.extent
        if not math.isfinite(half):
            raise ArgumentError("Growth of a half-slab is that of a half-space; use half_space")
        omega_low = unit_ball_volume(m - 1)

        def cosine_moment(si, power):
            # ∫ (s² − z²)^{(power−1)/2} dz over |z| < min(s, a), with z = s sin θ
            alpha = math.asin(min(si, half) / si)
            return si ** power * integrate.quad(lambda t: math.cos(t) ** power, -alpha, alpha)[0]

        def ball(s):
            s = np.atleast_1d(np.asarray(s, dtype=float))
            return np.array([omega_low * cosine_moment(si, m) for si in s])

        def sphere(s):
            s = np.atleast_1d(np.asarray(s, dtype=float))
            # |∂B_s ∩ {|z| < a}| = (m−1)ω_{m−1} s ∫ (s² − z²)^{(m−3)/2} dz
            return np.array([(m - 1) * omega_low * si * cosine_moment(si, m - 2) for si in s])

        return sphere if mode is GrowthMode.SURFACE else ball

    raise ArgumentError(f"No closed growth model for domain shape {domain.shape.value}")
