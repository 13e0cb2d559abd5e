"""
Field Factory Module

This module builds the GraphField instances used by the checks and the
bundled scenarios: exact profiles embedded over strips and tilted regions,
the hemispheric cap, polynomial test graphs, radial graphs over hyperbolic
space and converged slab solves.
"""

import math
import logging
from typing import Optional, Sequence

import numpy as np

from geometry.base_metric import EuclideanMetric, HyperbolicMetric
from geometry.model_domain import ModelDomain
from graph.grid import Grid, GraphField
from profiles.capillary_profile import CapillaryProfile, evaluate_formula
from profiles.radial_profile import RadialProfile, radial_eval
from profiles.tilted_profile import TiltedProfile, TiltVariant
from utils.error_utils import ArgumentError, DomainError

logger = logging.getLogger(__name__)

def strip_profile_field(profile: CapillaryProfile, width: float, n: int,
                        half_width: float = 0.5, n_s: Optional[int] = None) -> GraphField:
    """
    Embed a capillary profile u(t) over the strip (0, T) × ℝ.

    The grid covers [0, T] × [−w, w] so both boundary lines are grid faces.

    Args:
        profile: Capillary profile
        width: Strip width T inside the profile's interval
        n: Nodes along t
        half_width: Half extent w of the grid along s
        n_s: Nodes along s (same spacing as t by default)

    Returns:
        GraphField over the strip
    """
    inside = width <= profile.t_max if profile.closed_right_end else width < profile.t_max
    if not inside:
        raise DomainError("Strip is wider than the profile's interval",
                          {"T": width, "t_max": profile.t_max})
    if n_s is None:
        h = width / (n - 1)
        n_s = max(5, 2 * int(round(half_width / h)) + 1)
    grid = Grid.uniform((0.0, -half_width), (width, half_width), (n, n_s))
    domain = ModelDomain.strip(width)
    values = evaluate_formula(profile, grid.axes[0])
    u = np.broadcast_to(np.asarray(values.u, dtype=float)[:, None], grid.shape)
    logger.debug(f"Embedded profile {profile} on a {grid.shape} strip grid")
    return GraphField(domain, grid, u)

def tilted_profile_field(profile: TiltedProfile, n_s: int, half_width: float = 0.5) -> GraphField:
    """
    Embed a tilted profile over a box around its boundary line.

    The s axis spans [−w, w] and the τ axis [a₁ − 2w, a₁ + 2w] with a common
    spacing h = 2w/(n_s − 1). When a₀ is an integer and n_s is odd
    the lower boundary line τ = a₀s + a₁ passes through grid nodes.

    Values outside the region use the analytic continuation of the profile,
    which must stay real on the whole box.

    Args:
        profile: Tilted profile
        n_s: Nodes along s
        half_width: Half extent w along s

    Returns:
        GraphField over the tilted region
    """
    if n_s < 5 or n_s % 2 == 0:
        raise ArgumentError("n_s must be odd and >= 5", {"n_s": n_s})
    n_tau = 2 * n_s - 1
    grid = Grid.uniform((profile.a1 - 2 * half_width, -half_width),
                        (profile.a1 + 2 * half_width, half_width), (n_tau, n_s))
    coords = grid.coords
    t = profile.distance(coords[..., 0], coords[..., 1])
    if profile.H == 0.0:
        u = profile.b - profile.c * t
    else:
        with np.errstate(invalid="ignore"):
            u = np.asarray(evaluate_formula(profile.profile, t).u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise DomainError("Profile continuation is not real on the whole grid box",
                          {"a0": profile.a0, "variant": TiltVariant(profile.variant).value})
    return GraphField(profile.domain(), grid, u)

def hemisphere_field(n: int, m: int = 2, H: float = 1.0, radius: float = 1.0) -> GraphField:
    """
    Spherical cap u = m/H − √(m²/H² − |x|²) over the Euclidean ball B_R.

    The grid is the box [−R, R]^m, on which the cap formula must stay real.

    Args:
        n: Nodes per axis
        m: Dimension
        H: Mean curvature
        radius: Ball radius R

    Returns:
        GraphField over the ball
    """
    profile = RadialProfile(m, 0.0, H)
    if not radius * math.sqrt(m) < profile.r_max:
        raise ArgumentError("Grid box corners leave the cap's domain",
                            {"R": radius, "r_max": profile.r_max})
    base = EuclideanMetric(m)
    grid = Grid.uniform([-radius] * m, [radius] * m, [n] * m)
    r = np.linalg.norm(grid.coords, axis=-1)
    u = radial_eval(profile, r).u
    return GraphField(ModelDomain.ball(base, radius), grid, u)

def polynomial_field(n: int, quadratic: Sequence[Sequence[float]], linear: Sequence[float],
                     constant: float = 0.0, half_width: float = 1.0) -> GraphField:
    """
    u(x) = ½ xᵀQx + b·x + c over a Euclidean ball of radius w.

    Args:
        n: Nodes per axis on [−w, w]^m
        quadratic: Symmetric matrix Q
        linear: Vector b
        constant: c
        half_width: w

    Returns:
        GraphField
    """
    Q = np.asarray(quadratic, dtype=float)
    b = np.asarray(linear, dtype=float)
    m = b.size
    if Q.shape != (m, m):
        raise ArgumentError("Quadratic coefficients must be an m x m matrix", {"shape": Q.shape, "m": m})
    Q = 0.5 * (Q + Q.T)
    base = EuclideanMetric(m)
    grid = Grid.uniform([-half_width] * m, [half_width] * m, [n] * m)
    return GraphField.from_function(
        ModelDomain.ball(base, half_width), grid,
        lambda x: 0.5 * np.einsum("...i,ij,...j->...", x, Q, x) + x @ b + constant,
    )

def radial_hyperbolic_field(profile: RadialProfile, n: int, r_range: Sequence[float] = (0.2, 1.0),
                            angle_range: Sequence[float] = (0.5, 1.5)) -> GraphField:
    """
    Radial CMC graph over a polar patch of the hyperbolic plane.

    Args:
        profile: Radial profile with m = 2 and κ > 0
        n: Nodes per axis
        r_range: Radial window inside (0, R]
        angle_range: Angular window

    Returns:
        GraphField over the ball of radius r_range[1]
    """
    if profile.m != 2 or profile.kappa <= 0.0:
        raise ArgumentError("Polar patches need a hyperbolic profile with m = 2",
                            {"m": profile.m, "kappa": profile.kappa})
    base = HyperbolicMetric(2, profile.kappa)
    grid = Grid.uniform((r_range[0], angle_range[0]), (r_range[1], angle_range[1]), (n, n))
    radial = radial_eval(profile, grid.axes[0]).u
    u = np.broadcast_to(np.asarray(radial)[:, None], grid.shape)
    return GraphField(ModelDomain.ball(base, r_range[1]), grid, u)

def slab_solution_field(nodes: np.ndarray, values: np.ndarray, half_width: float = 0.5,
                        n_s: int = 5) -> GraphField:
    """
    Embed a one-dimensional slab solution u(t) over the strip (0, T) × ℝ.

    Args:
        nodes: Uniform nodes 0 = t_0 < ... < t_N = T
        values: Nodal solution values
        half_width: Half extent along s
        n_s: Nodes along s

    Returns:
        GraphField over the strip
    """
    nodes = np.asarray(nodes, dtype=float)
    width = float(nodes[-1] - nodes[0])
    grid = Grid.uniform((nodes[0], -half_width), (nodes[-1], half_width), (nodes.size, n_s))
    u = np.broadcast_to(np.asarray(values, dtype=float)[:, None], grid.shape)
    return GraphField(ModelDomain.strip(width), grid, u)
