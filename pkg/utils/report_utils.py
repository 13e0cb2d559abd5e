"""
Report Utilities Module

This module defines the VerificationReport value object returned by every
identity and inequality check, and helpers for refinement studies.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Any, Callable, List, Sequence

import numpy as np

from utils.error_utils import ArgumentError

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class VerificationReport:
    """
    Residuals and tolerances of one check evaluated on a grid.

    ``residuals`` and ``tolerances`` share keys; a residual passes when it is
    at most its tolerance. Keys without a tolerance are informational.
    """
    name: str
    residuals: Dict[str, float]
    tolerances: Dict[str, float]
    grid: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Whether every residual with a tolerance is within it."""
        return all(
            self.residuals[key] <= tol
            for key, tol in self.tolerances.items()
            if key in self.residuals
        )

    def failures(self) -> List[str]:
        """Keys whose residual exceeds the tolerance."""
        return [
            key for key, tol in self.tolerances.items()
            if key in self.residuals and not self.residuals[key] <= tol
        ]

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the report to a plain dictionary with fixed field order.

        Returns:
            Dictionary ready for JSON emission
        """
        return {
            "name": self.name,
            "passed": self.passed,
            "residuals": dict(self.residuals),
            "tolerances": dict(self.tolerances),
            "grid": dict(self.grid),
            "details": dict(self.details),
        }

def observed_order(spacings: Sequence[float], errors: Sequence[float]) -> float:
    """
    Fit the convergence order p of errors ~ c h^p in log-log space.

    Args:
        spacings: Grid spacings, at least two
        errors: Positive errors or residuals at those spacings

    Returns:
        The fitted slope p
    """
    h = np.asarray(spacings, dtype=float)
    e = np.asarray(errors, dtype=float)
    if h.size < 2 or h.size != e.size:
        raise ArgumentError("Need at least two matching (h, error) pairs",
                            {"spacings": h.size, "errors": e.size})
    if np.any(e <= 0.0) or np.any(h <= 0.0):
        raise ArgumentError("Spacings and errors must be positive for a log-log fit")
    slope, _ = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope)

def refinement_study(
    run: Callable[[int], Dict[str, float]],
    sizes: Sequence[int],
) -> Dict[str, Any]:
    """
    Run a check on successively refined grids and fit the order of each residual.

    Args:
        run: Callable taking a node count and returning {"h": spacing, key: residual, ...}
        sizes: Node counts, coarse to fine

    Returns:
        Dictionary with the per-size rows and the fitted order for each residual key
    """
    rows = [run(n) for n in sizes]
    spacings = [row["h"] for row in rows]
    keys = [key for key in rows[0] if key != "h"]
    orders = {}
    for key in keys:
        values = [row[key] for row in rows]
        if all(v > 0.0 for v in values):
            orders[key] = observed_order(spacings, values)
    logger.info(f"Refinement study over {list(sizes)}: orders {orders}")
    return {"rows": rows, "orders": orders}
