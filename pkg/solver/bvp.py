"""
BVP Module

This module defines the boundary value problems handled by the Newton solver
(Dirichlet problems for div(Du/W) = H on slabs and balls) and the immutable
reports the solver returns.
"""

import math
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Any, Optional, Tuple

import numpy as np
import pandas as pd

from geometry.model_domain import DomainShape, ModelDomain
from utils.error_utils import ArgumentError

logger = logging.getLogger(__name__)

MIN_GRID_N = 16

class SolveForm:
    """Discrete forms of the mean curvature operator."""
    DIVERGENCE = "divergence"
    NON_DIVERGENCE = "non_divergence"

@dataclass(frozen=True)
class BvpSpec:
    """
    Dirichlet problem div(Du/√(1+|Du|²)) = H on a slab or a ball.

    ``dirichlet`` maps boundary component labels ("t=0", "t=T" or "r=R")
    to boundary values.
    """
    domain: ModelDomain
    H: float
    dirichlet: Dict[str, float]
    grid_n: int

    def __post_init__(self):
        if int(self.grid_n) != self.grid_n or self.grid_n < MIN_GRID_N:
            raise ArgumentError(f"grid_n must be an integer >= {MIN_GRID_N}", {"grid_n": self.grid_n})
        if not math.isfinite(self.H):
            raise ArgumentError("H must be finite", {"H": self.H})
        if self.domain.shape not in (DomainShape.SLAB, DomainShape.STRIP, DomainShape.BALL):
            raise ArgumentError("Solver supports slabs and balls only", {"shape": self.domain.shape.value})
        if not math.isfinite(self.domain.extent):
            raise ArgumentError("Solver needs a bounded slab", {"extent": self.domain.extent})
        labels = sorted(c.label for c in self.domain.boundary_components)
        if sorted(self.dirichlet) != labels:
            raise ArgumentError("Dirichlet data must be given on every boundary component",
                                {"expected": labels, "got": sorted(self.dirichlet)})
        if not all(math.isfinite(v) for v in self.dirichlet.values()):
            raise ArgumentError("Dirichlet values must be finite")

    @property
    def radial(self) -> bool:
        return self.domain.shape is DomainShape.BALL

    @property
    def extent(self) -> float:
        return self.domain.extent

    @property
    def nodes(self) -> np.ndarray:
        """Uniform nodes on [0, T] or [0, R]."""
        return np.linspace(0.0, self.extent, self.grid_n)

    @property
    def spacing(self) -> float:
        return self.extent / (self.grid_n - 1)

    def describe(self) -> Dict[str, Any]:
        return {
            "domain": self.domain.describe(),
            "H": self.H,
            "dirichlet": dict(self.dirichlet),
            "grid_n": self.grid_n,
        }

@dataclass(frozen=True)
class GradientBoundResult:
    """Outcome of the discrete gradient estimate sup z ≤ max{A, boundary sup z}."""
    z_interior_max: float
    z_boundary_max: float
    A_used: float
    C_used: float
    kappa: float
    slack: float
    num_tol: float

    @property
    def verdict(self) -> str:
        return "pass" if self.slack >= -self.num_tol else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "z_interior_max": self.z_interior_max,
            "z_boundary_max": self.z_boundary_max,
            "A_used": self.A_used,
            "C_used": self.C_used,
            "kappa": self.kappa,
            "slack": self.slack,
            "verdict": self.verdict,
        }

@dataclass(frozen=True, eq=False)
class SolveReport:
    """Result of a Newton solve; u and nodes are empty when the problem is infeasible."""
    spec: BvpSpec
    u: np.ndarray
    nodes: np.ndarray
    newton_iters: int
    final_residual: float
    convergence_history: Tuple[float, ...]
    converged: bool
    message: str = ""
    form: str = SolveForm.DIVERGENCE
    gradient_bound: Optional[GradientBoundResult] = None
    feasibility: Dict[str, Any] = field(default_factory=dict)

    @property
    def du(self) -> np.ndarray:
        """Second-order nodal derivative of the solution."""
        return np.gradient(self.u, self.nodes, edge_order=2)

    @property
    def W(self) -> np.ndarray:
        du = self.du
        return np.sqrt(1.0 + du * du)

    def boundary_index(self) -> np.ndarray:
        """Indices of the Dirichlet nodes."""
        if self.spec.radial:
            return np.array([self.nodes.size - 1])
        return np.array([0, self.nodes.size - 1])

    def with_gradient_bound(self, result: GradientBoundResult) -> "SolveReport":
        return replace(self, gradient_bound=result)

    def to_frame(self, C: float = 0.0) -> pd.DataFrame:
        """
        Nodal table of the solution.

        Args:
            C: Exponent of z = W e^{−Cu}

        Returns:
            DataFrame with columns node, u, du, W, z
        """
        W = self.W
        return pd.DataFrame({
            "node": self.nodes,
            "u": self.u,
            "du": self.du,
            "W": W,
            "z": W * np.exp(-C * self.u),
        })

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "spec": self.spec.describe(),
            "form": self.form,
            "converged": self.converged,
            "message": self.message,
            "newton_iters": self.newton_iters,
            "final_residual": self.final_residual,
            "convergence_history": list(self.convergence_history),
            "feasibility": dict(self.feasibility),
        }
        if self.gradient_bound is not None:
            result["gradient_bound"] = self.gradient_bound.to_dict()
        return result
