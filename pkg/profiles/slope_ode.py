"""
Slope ODE Module

Independent reconstruction of a capillary profile from its slope. With u as
the independent variable, the slope β(u) = u'(t(u)) and the inverse t(u)
solve

    dβ/du = H (1 + β²)^{3/2} / β,    dt/du = 1 / β,

starting from β(b₁) = |c₁|, t(b₁) = 0. The blow-up (H > 0, β → ∞) or
blow-down (H < 0, β → 0) point closes the profile at t_max; the last stretch
is added exactly through w = β/√(1+β²), which satisfies dw/dt = H.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from profiles.capillary_profile import CapillaryProfile, evaluate_formula
from utils.error_utils import ArgumentError, ConvergenceError, DomainError

logger = logging.getLogger(__name__)

# Default offset of the series start above b₁ when c₁ = 0.
SERIES_OFFSET = 1e-10

@dataclass(frozen=True, eq=False)
class OdeProfile:
    """Numerical profile from the slope ODE."""
    t: np.ndarray
    u: np.ndarray
    beta: np.ndarray
    t_max: float
    singular_start: bool
    n_evaluations: int

    def max_deviation(self, profile: CapillaryProfile, t_fraction: float = 0.99) -> float:
        """
        Max |u_ode − u_closed| at the ODE nodes with t ≤ t_fraction·t_max.

        Args:
            profile: Closed-form profile with the same data
            t_fraction: Fraction of t_max kept in the comparison

        Returns:
            Max absolute deviation
        """
        limit = t_fraction * profile.t_max if math.isfinite(profile.t_max) else np.inf
        keep = self.t <= limit
        closed = evaluate_formula(profile, self.t[keep]).u
        return float(np.max(np.abs(self.u[keep] - closed)))

def profile_from_ode(H: float, b1: float, c1: float, rtol: float = 1e-10,
                     atol: float = 1e-12, beta_cap: float = 1e3, beta_floor: float = 1e-3,
                     t_cap: float = 1.0, series_offset: float = SERIES_OFFSET) -> OdeProfile:
    """
    Integrate the slope ODE in the u variable with adaptive RK45.

    Args:
        H: Mean curvature
        b1: Boundary value u(0)
        c1: Boundary normal derivative (u'(0) = −c₁)
        rtol: Relative tolerance of the integrator
        atol: Absolute tolerance of the integrator
        beta_cap: Slope at which a blow-up (H > 0) is closed exactly
        beta_floor: Slope at which a blow-down (H < 0) is closed exactly
        t_cap: Length covered when H = 0
        series_offset: Offset δ of the series start u = b₁ + δ when c₁ = 0

    Returns:
        OdeProfile with nodes (t_k, u_k, β_k) and the estimated t_max
    """
    if not all(math.isfinite(v) for v in (H, b1, c1)):
        raise ArgumentError("ODE data must be finite")
    c0 = abs(c1)
    singular = False

    if c0 == 0.0:
        if H <= 0.0:
            raise DomainError("Zero initial slope only starts a profile when H > 0", {"H": H})
        singular = True
        u0 = b1 + series_offset
        beta0 = math.sqrt(2.0 * H * series_offset)
        t0 = math.sqrt(2.0 * series_offset / H)
        logger.warning(
            f"Singular start of the slope ODE (c1=0, H={H}); series start at u=b1+{series_offset:g}"
        )
    else:
        u0, beta0, t0 = b1, c0, 0.0

    if H == 0.0:
        u_end = b1 + c0 * t_cap
        u = np.linspace(u0, u_end, 33)
        t = (u - b1) / c0
        return OdeProfile(t, u, np.full_like(u, c0), math.inf, singular, 0)

    def rhs(_, y):
        beta = y[0]
        return [H * (1.0 + beta * beta) ** 1.5 / beta, 1.0 / beta]

    if H > 0.0:
        beta_cap = max(beta_cap, 10.0 * beta0)

        def stop(_, y):
            return y[0] - beta_cap
        # u can rise at most 2/H before the slope blows up.
        u_span = 2.0 / H
    else:
        beta_floor = min(beta_floor, 0.1 * beta0)

        def stop(_, y):
            return y[0] - beta_floor
        u_span = 2.0 / abs(H)
    stop.terminal = True
    stop.direction = 0

    solution = solve_ivp(rhs, (u0, u0 + u_span), [beta0, t0], method="RK45",
                         rtol=rtol, atol=atol, events=stop)
    if solution.status != 1 or not len(solution.t_events[0]):
        raise ConvergenceError("Slope ODE ended before reaching the closing slope",
                               details={"status": solution.status, "message": solution.message})

    u = np.concatenate([[b1] if singular else [], solution.t])
    beta = np.concatenate([[0.0] if singular else [], solution.y[0]])
    t = np.concatenate([[0.0] if singular else [], solution.y[1]])

    beta_end, t_end = solution.y_events[0][0]
    w_end = beta_end / math.sqrt(1.0 + beta_end ** 2)
    tail = (1.0 - w_end) / H if H > 0.0 else w_end / abs(H)
    t_max = float(t_end + tail)

    logger.info(f"Slope ODE (H={H}, c1={c1}): {solution.nfev} evaluations, t_max {t_max:.12g}")
    return OdeProfile(t, u, beta, t_max, singular, int(solution.nfev))
