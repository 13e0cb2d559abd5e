"""
Parameter Gate Module

This module decides whether a pair (C, A) is admissible for the gradient
estimate sup W e^{−Cu} ≤ max{A, boundary sup} given (m, κ, H).

With s = 1/t the gate condition
    H²/m − CH/t + (C² − (m−1)κ²)(t² − 1)/t² ≥ 0 for every t ≥ A
becomes P(s) = H²/m − CHs + (C² − (m−1)κ²)(1 − s²) ≥ 0 on (0, 1/A], which is
decided exactly from the vertex and endpoint values of the quadratic.
"""

import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Any, List, Optional, Tuple

import numpy as np

from utils.error_utils import ArgumentError, CapillaryLabError, PreconditionError, ConvergenceError

logger = logging.getLogger(__name__)

# Tolerance on polynomial coefficients; ties at zero count as "≥ 0 holds".
COEFF_TOL = 1e-12
# Strict inequalities need slack above this value.
STRICT_TOL = 1e-12
PERTURB_MAX_ITERS = 60

class CaseLabel(str, Enum):
    """Branches of the case analysis for the gate condition."""
    H_NONPOS = "H_nonpos"
    H_POS_C_LARGE = "H_pos_C_large"
    H_POS_C_SMALL_GENERIC = "H_pos_C_small_generic"
    H_POS_C_SMALL_DISCRIMINANT = "H_pos_C_small_discriminant"

@dataclass(frozen=True)
class Quadratic:
    """q(s) = a s² + b s + c."""
    a: float
    b: float
    c: float

    def __call__(self, s):
        return (self.a * s + self.b) * s + self.c

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.a), abs(self.b), abs(self.c))

    @property
    def tol(self) -> float:
        return COEFF_TOL * self.scale

    def infimum(self, s_max: float) -> Tuple[float, float]:
        """
        Exact infimum over (0, s_max], attained on the closure [0, s_max].

        Returns:
            Tuple of (infimum value, minimizing s)
        """
        candidates = [(self(0.0), 0.0), (self(s_max), s_max)]
        if self.a > 0.0:
            vertex = -self.b / (2.0 * self.a)
            if 0.0 < vertex < s_max:
                candidates.append((self(vertex), vertex))
        value, where = min(candidates, key=lambda pair: pair[0])
        return float(value), float(where)

def gate_polynomial(m: int, kappa: float, H: float, C: float) -> Quadratic:
    """P(s) = H²/m − CHs + (C² − (m−1)κ²)(1 − s²)."""
    lead = (m - 1) * kappa ** 2 - C ** 2
    return Quadratic(a=lead, b=-C * H, c=H ** 2 / m - lead)

def perturbed_polynomial(m: int, kappa: float, H: float, C1: float, C2: float) -> Quadratic:
    """Q(s) = H²/m − C₁Hs + (C₂² − (m−1)κ²)(1 − s²)."""
    lead = (m - 1) * kappa ** 2 - C2 ** 2
    return Quadratic(a=lead, b=-C1 * H, c=H ** 2 / m - lead)

def _validate(m: int, kappa: float, C: float, A: Optional[float] = None) -> None:
    if int(m) != m or m < 2:
        raise ArgumentError("Dimension m must be an integer >= 2", {"m": m})
    if kappa < 0.0:
        raise ArgumentError("kappa must be >= 0", {"kappa": kappa})
    if C < 0.0:
        raise ArgumentError("C must be >= 0", {"C": C})
    if A is not None and not A >= 1.0:
        raise ArgumentError("A must be >= 1", {"A": A})

@dataclass(frozen=True)
class ParamCertificate:
    """Feasibility verdicts of a parameter tuple for the gradient estimate."""
    m: int
    kappa: float
    H: float
    C: float
    A: float
    hp_ok: bool
    gate_ok: bool
    case_label: Optional[CaseLabel]
    slack: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m, "kappa": self.kappa, "H": self.H, "C": self.C, "A": self.A,
            "hp_ok": self.hp_ok, "gate_ok": self.gate_ok,
            "case_label": self.case_label.value if self.case_label else None,
            "slack": self.slack,
        }

def check_hp(m: int, kappa: float, H: float, C: float) -> bool:
    """
    Check H²/m + C² − (m−1)κ² ≥ 0, strictly when H > 0.

    Args:
        m: Dimension
        kappa: Ricci bound parameter
        H: Mean curvature
        C: Exponent

    Returns:
        Whether the condition holds
    """
    _validate(m, kappa, C)
    value = H ** 2 / m + C ** 2 - (m - 1) * kappa ** 2
    scale = max(1.0, H ** 2 / m, C ** 2, (m - 1) * kappa ** 2)
    if H > 0.0:
        return value > STRICT_TOL * scale
    return value >= -COEFF_TOL * scale

def check_gate(m: int, kappa: float, H: float, C: float, A: float) -> Tuple[bool, float]:
    """
    Decide P(s) ≥ 0 on (0, 1/A] exactly.

    Args:
        m: Dimension
        kappa: Ricci bound parameter
        H: Mean curvature
        C: Exponent
        A: Threshold A ≥ 1

    Returns:
        Tuple of (verdict, infimum of P on (0, 1/A])
    """
    _validate(m, kappa, C, A)
    poly = gate_polynomial(m, kappa, H, C)
    inf_value, _ = poly.infimum(1.0 / A)
    return inf_value >= -poly.tol, inf_value

def sampling_oracle(m: int, kappa: float, H: float, C: float, A: float,
                    n_points: int = 1_000_000) -> Tuple[bool, float]:
    """
    Brute-force verdict: evaluate P on n_points of (0, 1/A].

    Args:
        m, kappa, H, C, A: Parameter tuple
        n_points: Number of samples

    Returns:
        Tuple of (verdict, sampled minimum)
    """
    poly = gate_polynomial(m, kappa, H, C)
    s = np.linspace(0.0, 1.0 / A, n_points + 1)[1:]
    minimum = float(np.min(poly(s)))
    return minimum >= -poly.tol, minimum

def _discriminant_exception(m: int, kappa: float, H: float, C: float) -> bool:
    """√(1+m/4)C < √(m−1)κ and H²/m ≥ ((m−1)κ² − C²)² / ((m−1)κ² − (1+m/4)C²)."""
    gap = (m - 1) * kappa ** 2 - (1.0 + m / 4.0) * C ** 2
    if not gap > 0.0:
        return False
    lead = (m - 1) * kappa ** 2 - C ** 2
    return H ** 2 / m >= lead ** 2 / gap - COEFF_TOL * max(1.0, lead ** 2 / gap)

def classify(m: int, kappa: float, H: float, C: float, A: float) -> Dict[str, Any]:
    """
    Branch of the case analysis and the verdict of that branch.

    Args:
        m, kappa, H, C, A: Parameter tuple satisfying check_hp

    Returns:
        Dictionary with case_label, branch conditions, branch verdict and the
        exact verdict of check_gate
    """
    _validate(m, kappa, C, A)
    if not check_hp(m, kappa, H, C):
        raise PreconditionError("Condition on H²/m + C² − (m−1)κ² fails",
                                {"m": m, "kappa": kappa, "H": H, "C": C})
    poly = gate_polynomial(m, kappa, H, C)
    tol = poly.tol
    conditions: Dict[str, bool] = {}

    if H <= 0.0:
        label = CaseLabel.H_NONPOS
        branch_verdict = True
    elif C >= math.sqrt(m - 1) * kappa:
        label = CaseLabel.H_POS_C_LARGE
        conditions["P(1/A)>=0"] = bool(poly(1.0 / A) >= -tol)
        branch_verdict = conditions["P(1/A)>=0"]
    elif _discriminant_exception(m, kappa, H, C):
        label = CaseLabel.H_POS_C_SMALL_DISCRIMINANT
        conditions["discriminant_exception"] = True
        branch_verdict = True
    else:
        label = CaseLabel.H_POS_C_SMALL_GENERIC
        conditions["P(1/A)>=0"] = bool(poly(1.0 / A) >= -tol)
        conditions["CHA+2(C^2-(m-1)kappa^2)>=0"] = bool(
            C * H * A + 2.0 * (C ** 2 - (m - 1) * kappa ** 2) >= -tol * A
        )
        branch_verdict = all(conditions.values())

    verdict, slack = check_gate(m, kappa, H, C, A)
    if branch_verdict != verdict:
        logger.warning(
            f"Branch verdict {branch_verdict} differs from exact verdict {verdict} "
            f"for (m={m}, kappa={kappa}, H={H}, C={C}, A={A}), slack {slack:.3e}"
        )
    return {
        "case_label": label,
        "conditions": conditions,
        "branch_verdict": branch_verdict,
        "verdict": verdict,
        "slack": slack,
    }

def certify(m: int, kappa: float, H: float, C: float, A: float) -> ParamCertificate:
    """
    Build the certificate of a parameter tuple.

    gate_ok requires both the hp condition and the gate condition.
    """
    hp_ok = check_hp(m, kappa, H, C)
    gate_verdict, slack = check_gate(m, kappa, H, C, A)
    label = classify(m, kappa, H, C, A)["case_label"] if hp_ok else None
    return ParamCertificate(int(m), float(kappa), float(H), float(C), float(A),
                            hp_ok, hp_ok and gate_verdict, label, slack)

@dataclass(frozen=True)
class Perturbation:
    """Strictly admissible perturbed parameters."""
    A1: float
    C1: float
    C2: float
    infimum: float
    iterations: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {"A1": self.A1, "C1": self.C1, "C2": self.C2,
                "infimum": self.infimum, "iterations": self.iterations}

def perturb(m: int, kappa: float, H: float, C: float, A: float, eps: float) -> Perturbation:
    """
    Find A < A₁ < A + ε and C < C₂ < C₁ < C + ε with
    inf over (0, 1/A₁] of Q(s) = H²/m − C₁Hs + (C₂² − (m−1)κ²)(1 − s²) > 0.

    H ≤ 0 uses A₁ = A + ε/2, C₁ = C + ε/2, C₂ = C + ε/4. For H > 0, A₁ = A + ε/2
    is fixed first and the shift δ of C₁ = C + δ, C₂ = C + δ/2 is halved from
    ε/2 until the infimum is strictly positive.

    When P touches zero at its vertex inside (0, 1/A), the shift of C₁
    lowers Q there faster than the shift of C₂ raises it, so no strictly
    admissible triple exists nearby; this tangent case is rejected up front.

    Args:
        m, kappa, H, C, A: Admissible tuple
        eps: ε > 0

    Returns:
        Perturbation with the exact infimum of Q

    Raises:
        ArgumentError: If eps <= 0
        PreconditionError: If the tuple is not admissible or P is tangent to zero inside (0, 1/A)
        ConvergenceError: If no shift of C is found
    """
    if not eps > 0.0:
        raise ArgumentError("eps must be > 0", {"eps": eps})
    if not check_hp(m, kappa, H, C):
        raise PreconditionError("Condition on H²/m + C² − (m−1)κ² fails", {"H": H, "C": C})
    ok, slack = check_gate(m, kappa, H, C, A)
    if not ok:
        raise PreconditionError("Gate condition fails for (C, A)", {"C": C, "A": A, "slack": slack})

    poly = gate_polynomial(m, kappa, H, C)
    if H > 0.0 and poly.a > 0.0:
        vertex = -poly.b / (2.0 * poly.a)
        if 0.0 < vertex < 1.0 / A and poly(vertex) <= poly.tol:
            raise PreconditionError(
                "P is tangent to zero inside (0, 1/A); no strictly admissible perturbation exists",
                {"s": vertex, "P": float(poly(vertex)), "A": A},
            )

    A1 = A + 0.5 * eps
    delta = 0.5 * eps
    if H <= 0.0:
        C1, C2 = C + delta, C + 0.5 * delta
        inf_value, _ = perturbed_polynomial(m, kappa, H, C1, C2).infimum(1.0 / A1)
        logger.info(f"Perturbation (H<=0): A1={A1}, C1={C1}, C2={C2}, infimum {inf_value:.6g}")
        return Perturbation(A1, C1, C2, inf_value, 0)

    for iteration in range(1, PERTURB_MAX_ITERS + 1):
        C1, C2 = C + delta, C + 0.5 * delta
        inf_value, _ = perturbed_polynomial(m, kappa, H, C1, C2).infimum(1.0 / A1)
        if inf_value > STRICT_TOL:
            logger.info(
                f"Perturbation (H>0): A1={A1}, C1={C1}, C2={C2}, infimum {inf_value:.6g} "
                f"after {iteration} iterations"
            )
            return Perturbation(A1, C1, C2, inf_value, iteration)
        delta *= 0.5

    raise ConvergenceError("Perturbation search exhausted", details={"eps": eps, "last_delta": delta})

@dataclass(frozen=True)
class MenuEntry:
    """An admissible (A, C) choice with its gate slack."""
    label: str
    A: float
    C: float
    slack: float = field(default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, "A": self.A, "C": self.C, "slack": self.slack}

def admissible_menu(m: int, kappa: float, H: float) -> List[MenuEntry]:
    """
    All standard admissible choices of (A, C) applicable to (m, κ, H).

    Args:
        m: Dimension
        kappa: Ricci bound parameter
        H: Mean curvature

    Returns:
        List of menu entries, each passing check_hp and check_gate
    """
    _validate(m, kappa, 0.0)
    root = math.sqrt(m - 1) * kappa
    rows: List[Tuple[str, float, float]] = []
    if kappa == 0.0:
        rows.append(("flat_base", 1.0, 0.0))
    if H == 0.0:
        rows.append(("minimal", 1.0, root))
    if kappa > 0.0 and abs(H) > math.sqrt(m * (m - 1)) * kappa:
        rows.append(("large_mean_curvature", 1.0, 0.0))
    if kappa > 0.0 and -math.sqrt(m * (m - 1)) * kappa <= H <= 0.0:
        rows.append(("nonpositive_mean_curvature", 1.0, math.sqrt(max(0.0, (m - 1) * kappa ** 2 - H ** 2 / m))))
    if kappa > 0.0 and H >= 0.0:
        A = 1.0 + math.sqrt(H / root)
        rows.append(("nonnegative_mean_curvature", A, A * root))
    rows.append(("universal", math.sqrt(1.0 + m / 3.0), 2.0 * root))

    menu = []
    for label, A, C in rows:
        ok, slack = check_gate(m, kappa, H, C, A)
        if not (ok and check_hp(m, kappa, H, C)):
            raise CapillaryLabError(f"Menu row {label} fails the gate",
                                    {"A": A, "C": C, "m": m, "kappa": kappa, "H": H, "slack": slack})
        menu.append(MenuEntry(label, A, C, slack))
    return menu

def minimal_admissible_A(m: int, kappa: float, H: float, C: float) -> Optional[float]:
    """
    Smallest A ≥ 1 for which the gate holds, or None when the hp condition fails.

    For H ≤ 0 every A works. For H > 0 the gate holds exactly for 1/A below
    the smallest positive root of P, since P(0) > 0.

    Args:
        m, kappa, H, C: Parameters

    Returns:
        Minimal admissible A
    """
    if not check_hp(m, kappa, H, C):
        return None
    if H <= 0.0 or check_gate(m, kappa, H, C, 1.0)[0]:
        return 1.0
    poly = gate_polynomial(m, kappa, H, C)
    roots = np.roots([poly.a, poly.b, poly.c])
    real_roots = sorted(float(r.real) for r in np.atleast_1d(roots)
                        if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real)) and r.real > 0.0)
    if not real_roots or real_roots[0] >= 1.0:
        return 1.0
    return 1.0 / real_roots[0]
