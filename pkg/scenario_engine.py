"""
Scenario Engine Module

This module defines the ScenarioEngine class, which runs one configured
scenario (parameter gate, exact profiles, solves, identity checks,
parabolicity tests) and writes its JSON and CSV artifacts.
"""

import os
import time
import logging
import datetime
from typing import Dict, List, Any, Optional, Tuple, Callable

import numpy as np
import pandas as pd

from config.config_manager import ConfigManager, Scenario, get_config_manager
from geometry.base_metric import EuclideanMetric, HyperbolicMetric, make_metric
from geometry.model_domain import ModelDomain
from geometry.parabolicity import model_growth, parabolicity_criterion
from graph.field_factory import (hemisphere_field, polynomial_field, radial_hyperbolic_field,
                                 slab_solution_field, strip_profile_field, tilted_profile_field)
from graph.grid import GraphField
from graph.operators import z_inequality_check
from graph.tensors import compute_tensors
from identities.boundary import boundary_identity_check
from identities.cases import IdentityCase, KillingField, bump_function
from identities.jacobi import jacobi_check
from identities.kato import kato_remainder_check
from identities.picone import picone_check
from identities.poincare import poincare_check, poincare_epsilon_terms
from params.parameter_gate import (admissible_menu, certify, check_gate, classify,
                                   minimal_admissible_A, perturb, perturbed_polynomial,
                                   sampling_oracle)
from profiles.capillary_profile import CapillaryProfile, profile_eval, profile_residual, profile_table
from profiles.radial_profile import RadialProfile, radial_eval, radial_z_profile
from profiles.slope_ode import profile_from_ode
from profiles.tilted_profile import TiltedProfile
from solver.bvp import BvpSpec, SolveForm, SolveReport
from solver.gradient_bound import verify_gradient_bound
from solver.newton import solve
from utils.error_utils import (ArgumentError, CapillaryLabError, ConfigurationError,
                               ConvergenceError, DomainError, PreconditionError, handle_error)
from utils.io_utils import write_csv, write_json
from utils.logging_utils import ScenarioLogger
from utils.report_utils import VerificationReport, refinement_study

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

# Newton residual ratios r_{k+1}/r_k² are only meaningful above the rounding floor.
TAIL_FLOOR = 1e-11

_REQUIRED = object()

def _as_float(raw: Any) -> float:
    if isinstance(raw, bool):
        raise TypeError("boolean")
    return float(raw)

def _as_int(raw: Any) -> int:
    value = _as_float(raw)
    if not value.is_integer():
        raise ValueError("not an integer")
    return int(value)

def _as_bool(raw: Any) -> bool:
    if isinstance(raw, bool):
        return raw
    raise TypeError("not a boolean")

def _as_str(raw: Any) -> str:
    if isinstance(raw, (list, bool)):
        raise TypeError("not a string")
    return str(raw)

def _as_floats(raw: Any) -> List[float]:
    items = raw if isinstance(raw, list) else [raw]
    return [_as_float(item) for item in items]

def _as_ints(raw: Any) -> List[int]:
    items = raw if isinstance(raw, list) else [raw]
    return [_as_int(item) for item in items]

def _as_strs(raw: Any) -> List[str]:
    items = raw if isinstance(raw, list) else [raw]
    return [_as_str(item) for item in items]

def newton_tail(history: List[float]) -> Optional[float]:
    """Largest ratio r_{k+1}/r_k² over steps whose residual is above the rounding floor."""
    ratios = [
        later / earlier ** 2
        for earlier, later in zip(history[:-1], history[1:])
        if later > TAIL_FLOOR and earlier > 0.0
    ]
    return max(ratios) if ratios else None

class ScenarioEngine:
    """
    Engine for running capillary lab scenarios.

    This class resolves the scenario inputs, dispatches to the library
    operation named by (command, action), maps the outcome to a status and
    writes the artifacts.
    """

    def __init__(self, scenario: Scenario, output_dir: Optional[str] = None,
                 config_manager: Optional[ConfigManager] = None, log_dir: Optional[str] = None):
        """
        Initialize the scenario engine.

        Args:
            scenario: Scenario to run
            output_dir: Root directory of the artifacts (settings value by default)
            config_manager: Configuration manager (global instance by default)
            log_dir: Directory of the per-scenario log (settings value by default)
        """
        self.config_manager = config_manager or get_config_manager()
        self.settings = self.config_manager.load_settings()
        self.scenario = scenario
        self.tolerances = self.config_manager.get_tolerances(scenario.tolerances)
        root = output_dir or scenario.output_dir or self.settings["output"]["output_dir"]
        self.output_dir = os.path.join(root, scenario.name)
        self.scenario_logger = ScenarioLogger(
            scenario.name, log_dir if log_dir is not None else self.settings["logging"]["log_dir"]
        )

        self.resolved: Dict[str, Any] = {}
        self.tables: Dict[str, pd.DataFrame] = {}
        self.result: Dict[str, Any] = {}
        self.status = "initialized"
        self.exit_code: Optional[int] = None
        self.field: Optional[GraphField] = None

        self._handlers: Dict[Tuple[str, str], Callable[[], Tuple[bool, Dict[str, Any]]]] = {
            ("params", "check"): self._params_check,
            ("params", "menu"): self._params_menu,
            ("params", "perturb"): self._params_perturb,
            ("exact", "eval"): self._exact_eval,
            ("exact", "residual"): self._exact_residual,
            ("exact", "ode"): self._exact_ode,
            ("solve", "slab"): lambda: self._solve("slab"),
            ("solve", "radial"): lambda: self._solve("radial"),
            ("verify", "kato"): self._verify_kato,
            ("verify", "boundary"): self._verify_boundary,
            ("verify", "picone"): self._verify_picone,
            ("verify", "poincare"): self._verify_poincare,
            ("verify", "jacobi"): self._verify_jacobi,
            ("verify", "gradient-bound"): self._verify_gradient_bound,
            ("verify", "z"): self._verify_z,
            ("parabolic", "check"): self._parabolic_check,
        }

        logger.info(f"Initialized ScenarioEngine for {scenario.name} ({scenario.command} {scenario.action})")

    # ------------------------------------------------------------------
    # Inputs

    def _get(self, key: str, default: Any = _REQUIRED, kind: Callable[[Any], Any] = _as_float) -> Any:
        """
        Resolve one input, converting it and recording the value used.

        Raises:
            ConfigurationError: If a required input is missing or cannot be converted
        """
        if key in self.scenario.inputs:
            raw = self.scenario.inputs[key]
        elif default is _REQUIRED:
            raise ConfigurationError(f"Missing input '{key}'",
                                     {"scenario": self.scenario.name, "section": "inputs", "key": key})
        else:
            raw = default
        if raw is None:
            value = None
        else:
            try:
                value = kind(raw)
            except (TypeError, ValueError):
                raise ConfigurationError(f"Input '{key}' has the wrong type",
                                         {"scenario": self.scenario.name, "section": "inputs",
                                          "key": key, "value": raw})
        self.resolved[key] = value
        return value

    def _windows(self, dim: int) -> List[Optional[Tuple[float, float]]]:
        """Parse the test-function windows, e.g. "free; -0.3:0.3"."""
        text = self._get("windows", kind=_as_str)
        parts = [part.strip() for part in text.split(";")]
        if len(parts) != dim:
            raise ConfigurationError("One window per axis is required",
                                     {"section": "inputs", "key": "windows", "dim": dim})
        windows = []
        for part in parts:
            if part == "free":
                windows.append(None)
                continue
            try:
                lower, upper = (float(v) for v in part.split(":"))
            except ValueError:
                raise ConfigurationError("Windows are 'free' or 'lower:upper'",
                                         {"section": "inputs", "key": "windows", "value": part})
            windows.append((lower, upper))
        return windows

    # ------------------------------------------------------------------
    # Run

    def run(self) -> int:
        """
        Run the scenario and write its artifacts.

        Returns:
            Exit status: 0 on pass, 1 on failure or skip, 2 on configuration errors
        """
        scenario = self.scenario
        self.status = "in_progress"
        self.scenario_logger.log_config(scenario.to_dict())
        self.scenario_logger.log_event("start", {"output_dir": self.output_dir})
        started = datetime.datetime.now().isoformat(timespec="seconds")
        clock = time.perf_counter()

        try:
            handler = self._handlers[(scenario.command, scenario.action)]
            passed, result = handler()
            self.status = "pass" if passed else "fail"
            self.exit_code = EXIT_PASS if passed else EXIT_FAIL
        except PreconditionError as e:
            logger.warning(f"Scenario {scenario.name} skipped: {e}")
            self.scenario_logger.log_event("skipped", {"reason": e.message})
            result = e.to_dict()
            self.status = "skipped"
            self.exit_code = EXIT_FAIL
        except ConvergenceError as e:
            result = handle_error(e, default_return=e.to_dict(), context=scenario.name)
            self.status = "fail"
            self.exit_code = EXIT_FAIL
        except (ConfigurationError, ArgumentError, DomainError) as e:
            result = handle_error(e, default_return=e.to_dict(), context=scenario.name)
            self.status = "error"
            self.exit_code = EXIT_CONFIG
        except CapillaryLabError as e:
            result = handle_error(e, default_return=e.to_dict(), context=scenario.name)
            self.status = "error"
            self.exit_code = EXIT_FAIL

        unused = sorted(set(scenario.inputs) - set(self.resolved))
        if unused:
            logger.warning(f"Scenario {scenario.name} ignores inputs: {unused}")

        self.result = result
        elapsed = time.perf_counter() - clock
        self._save_result({"started": started, "elapsed_s": elapsed})
        self.scenario_logger.log_event("end", {"status": self.status, "elapsed_s": round(elapsed, 3)})
        logger.info(f"Scenario {scenario.name} finished with status {self.status}")
        return self.exit_code

    def _save_result(self, timing: Dict[str, Any]) -> str:
        """
        Write the JSON result and the CSV tables.

        Returns:
            Path of the JSON file
        """
        artifacts = []
        if self.settings["output"].get("csv", True):
            for name, frame in self.tables.items():
                write_csv(os.path.join(self.output_dir, f"{name}.csv"), frame)
                artifacts.append(f"{name}.csv")
        if artifacts:
            self.result = dict(self.result, artifacts=artifacts)
        payload = {
            "scenario": self.scenario.name,
            "command": self.scenario.command,
            "action": self.scenario.action,
            "status": self.status,
            "inputs": dict(self.resolved),
            "result": self.result,
            "timing": timing,
        }
        return write_json(os.path.join(self.output_dir, "result.json"), payload)

    # ------------------------------------------------------------------
    # params

    def _params_tuple(self) -> Tuple[int, float, float]:
        return self._get("m", kind=_as_int), self._get("kappa"), self._get("H")

    def _params_check(self) -> Tuple[bool, Dict[str, Any]]:
        m, kappa, H = self._params_tuple()
        C = self._get("C")
        A = self._get("A")
        expect = self._get("expect", True, _as_bool)
        oracle_points = self._get("oracle_points", 0, _as_int)

        cert = certify(m, kappa, H, C, A)
        result: Dict[str, Any] = {
            "case_label": cert.case_label.value if cert.case_label else None,
            "verdict": cert.gate_ok,
            "slack": cert.slack,
            "hp": cert.hp_ok,
        }
        if cert.hp_ok:
            branch = classify(m, kappa, H, C, A)
            result["conditions"] = branch["conditions"]
            result["branch_verdict"] = branch["branch_verdict"]
        result["minimal_A"] = minimal_admissible_A(m, kappa, H, C)
        result["menu"] = [entry.to_dict() for entry in admissible_menu(m, kappa, H)]

        passed = cert.gate_ok == expect
        if oracle_points > 0:
            oracle_verdict, minimum = sampling_oracle(m, kappa, H, C, A, oracle_points)
            agrees = oracle_verdict == check_gate(m, kappa, H, C, A)[0]
            result["oracle"] = {"points": oracle_points, "verdict": oracle_verdict,
                                "minimum": minimum, "agrees": agrees}
            passed = passed and agrees
        return passed, result

    def _params_menu(self) -> Tuple[bool, Dict[str, Any]]:
        m, kappa, H = self._params_tuple()
        menu = admissible_menu(m, kappa, H)
        rows = [entry.to_dict() for entry in menu]
        self.tables["menu"] = pd.DataFrame(rows, columns=["label", "A", "C", "slack"])
        return bool(menu), {"menu": rows, "count": len(rows)}

    def _params_perturb(self) -> Tuple[bool, Dict[str, Any]]:
        m, kappa, H = self._params_tuple()
        C = self._get("C")
        A = self._get("A")
        eps_values = self._get("eps", kind=_as_floats)
        oracle_points = self._get("oracle_points", 100_000, _as_int)

        rows = []
        for eps in eps_values:
            p = perturb(m, kappa, H, C, A, eps)
            poly = perturbed_polynomial(m, kappa, H, p.C1, p.C2)
            s = np.linspace(0.0, 1.0 / p.A1, oracle_points + 1)[1:]
            sampled = float(np.min(poly(s)))
            bounds_ok = A < p.A1 < A + eps and C < p.C2 < p.C1 < C + eps
            rows.append(dict(p.to_dict(), eps=eps, sampled_minimum=sampled,
                             bounds_ok=bounds_ok, passed=bounds_ok and p.infimum > 0.0 and sampled > 0.0))
        self.tables["perturbations"] = pd.DataFrame(rows)
        return all(row["passed"] for row in rows), {"perturbations": rows}

    # ------------------------------------------------------------------
    # exact

    def _capillary_profile(self) -> CapillaryProfile:
        return CapillaryProfile(self._get("H"), self._get("b1", 0.0), self._get("c1"))

    def _exact_eval(self) -> Tuple[bool, Dict[str, Any]]:
        kind = self._get("profile", "capillary", _as_str)
        n = self._get("n", 1000, _as_int)
        C = self._get("C", 0.0)
        if kind == "radial":
            profile = RadialProfile(self._get("m", 2, _as_int), self._get("kappa", 0.0), self._get("H"))
            r_end = self._get("r_end")
            r, z, r_of_max = radial_z_profile(profile, C, r_end, n)
            value = radial_eval(profile, r)
            self.tables["profile"] = pd.DataFrame({"r": r, "u": value.u, "du": value.du,
                                                   "W": value.W, "z": z})
            return True, {"entire": profile.entire, "r_max": profile.r_max,
                          "r_of_max_z": r_of_max, "z_max": float(np.max(z))}
        if kind != "capillary":
            raise ConfigurationError(f"Unknown profile kind '{kind}'", {"section": "inputs", "key": "profile"})

        profile = self._capillary_profile()
        t_cap = self._get("t_cap", 1.0)
        t, value, z = profile_table(profile, n, t_cap, C)
        self.tables["profile"] = pd.DataFrame({"t": t, "u": value.u, "du": value.du, "W": value.W, "z": z})
        start = profile_eval(profile, 0.0)
        initial_error = max(abs(start.u - profile.b1), abs(start.du + profile.c1))
        result = dict(profile.to_dict(), u0=start.u, du0=start.du, initial_error=initial_error)
        return initial_error <= 1e-12, result

    def _exact_residual(self) -> Tuple[bool, Dict[str, Any]]:
        profile = self._capillary_profile()
        n = self._get("n", 1000, _as_int)
        t_cap = self._get("t_cap", 1.0)
        residual = profile_residual(profile, n, t_cap)
        tol = self.tolerances["profile_residual_tol"]
        return residual <= tol, dict(profile.to_dict(), residual=residual, tolerance=tol)

    def _exact_ode(self) -> Tuple[bool, Dict[str, Any]]:
        profile = self._capillary_profile()
        t_cap = self._get("t_cap", 1.0)
        ode = profile_from_ode(profile.H, profile.b1, profile.c1, t_cap=t_cap)
        deviation = ode.max_deviation(profile)
        tol = self.tolerances["ode_tol"]
        self.tables["ode"] = pd.DataFrame({"t": ode.t, "u": ode.u, "beta": ode.beta})
        result = dict(profile.to_dict(), max_deviation=deviation, tolerance=tol,
                      ode_t_max=ode.t_max, singular_start=ode.singular_start,
                      n_evaluations=ode.n_evaluations)
        return deviation <= tol, result

    # ------------------------------------------------------------------
    # solve

    def _problem(self, shape: str, n: int) -> Tuple[BvpSpec, Optional[Callable[[np.ndarray], np.ndarray]]]:
        """Build the Dirichlet problem and, when known, its exact solution."""
        m = self._get("m", 2, _as_int)
        H = self._get("H")
        if shape == "slab":
            T = self._get("T")
            c1 = self._get("c1", None)
            if c1 is not None:
                profile = CapillaryProfile(H, self._get("b1", 0.0), c1)
                a, b = profile.b1, float(profile_eval(profile, T).u)
                exact = lambda x: profile_eval(profile, x).u
            else:
                a, b = self._get("a"), self._get("b")
                exact = None
            spec = BvpSpec(ModelDomain.slab(EuclideanMetric(m), T), H, {"t=0": a, "t=T": b}, n)
            return spec, exact
        if shape != "radial":
            raise ConfigurationError(f"Unknown problem '{shape}'", {"section": "inputs", "key": "problem"})

        kappa = self._get("kappa", 0.0)
        R = self._get("R")
        boundary = self._get("boundary", 0.0)
        base = EuclideanMetric(m) if kappa == 0.0 else HyperbolicMetric(m, kappa)
        spec = BvpSpec(ModelDomain.ball(base, R), H, {"r=R": boundary}, n)
        profile = RadialProfile(m, kappa, H)
        exact = None
        if R < profile.r_max:
            shift = boundary - radial_eval(profile, R).u
            exact = lambda r: radial_eval(profile, r).u + shift
        return spec, exact

    def _run_solve(self, shape: str, n: int) -> Tuple[SolveReport, Optional[float]]:
        spec, exact = self._problem(shape, n)
        form = self._get("form", SolveForm.DIVERGENCE, _as_str)
        report = solve(spec, tol=self.tolerances["newton_tol"], form=form,
                       scenario_logger=self.scenario_logger)
        error = None
        if report.converged and exact is not None:
            error = float(np.max(np.abs(report.u - exact(report.nodes))))
        return report, error

    def _solve(self, shape: str) -> Tuple[bool, Dict[str, Any]]:
        n = self._get("n", 1000, _as_int)
        report, error = self._run_solve(shape, n)
        passed = report.converged
        C = self._get("C", 0.0)
        A = self._get("A", None)
        if report.converged and A is not None:
            bound = verify_gradient_bound(report, self._get("kappa", 0.0), C, A,
                                          self.tolerances["gradient_num_tol"])
            report = report.with_gradient_bound(bound)
            passed = passed and bound.verdict == "pass"

        result = report.to_dict()
        if report.converged:
            self.tables["solution"] = report.to_frame(C)
            result["newton_tail"] = newton_tail(list(report.convergence_history))
        if error is not None:
            tol = self.tolerances["solver_error_tol"]
            result["max_error"] = error
            result["error_tolerance"] = tol
            passed = passed and error <= tol

        sizes = self._get("refine", None, _as_ints)
        if sizes and report.converged and error is not None:
            def run(k: int) -> Dict[str, float]:
                rep, err = self._run_solve(shape, k)
                return {"h": rep.spec.spacing, "max_error": err}
            study = refinement_study(run, sizes)
            result["refinement"] = study
            passed = passed and self._orders_ok(study)
        return passed, result

    def _orders_ok(self, study: Dict[str, Any]) -> bool:
        min_order = self._get("min_order", None)
        if min_order is None:
            return True
        return all(order >= min_order for order in study["orders"].values())

    # ------------------------------------------------------------------
    # verify

    def _field(self, n: int) -> GraphField:
        """Build the graph field named by the ``field`` input at resolution n."""
        kind = self._get("field", kind=_as_str)
        half_width = self._get("half_width", 0.5)
        if kind == "strip":
            return strip_profile_field(self._capillary_profile(), self._get("T"), n, half_width)
        if kind == "tilted":
            profile = TiltedProfile(self._get("H", 0.0), self._get("b"), self._get("c"),
                                    self._get("a0"), self._get("a1"),
                                    self._get("variant", "epigraph", _as_str), self._get("a2", None))
            return tilted_profile_field(profile, n, half_width)
        if kind == "hemisphere":
            return hemisphere_field(n, self._get("m", 2, _as_int), self._get("H", 1.0), self._get("R", 0.5))
        if kind == "quadratic":
            linear = self._get("b", kind=_as_floats)
            m = len(linear)
            entries = self._get("q", kind=_as_floats)
            if len(entries) != m * m:
                raise ConfigurationError("q must hold m*m entries", {"section": "inputs", "key": "q"})
            return polynomial_field(n, np.reshape(entries, (m, m)), linear,
                                    self._get("constant", 0.0), half_width)
        if kind == "radial_hyperbolic":
            profile = RadialProfile(2, self._get("kappa"), self._get("H"))
            return radial_hyperbolic_field(
                profile, n,
                (self._get("r_min", 0.2), self._get("r_max", 1.0)),
                (self._get("theta_min", 0.5), self._get("theta_max", 1.5)),
            )
        if kind == "solved_slab":
            report, _ = self._run_solve("slab", n)
            if not report.converged:
                raise PreconditionError("Slab solve did not converge", {"message": report.message})
            return slab_solution_field(report.nodes, report.u, half_width, self._get("n_s", 5, _as_int))
        raise ConfigurationError(f"Unknown field '{kind}'", {"section": "inputs", "key": "field"})

    def _case(self, field: GraphField) -> IdentityCase:
        killing = KillingField(self._get("killing_axis", 0, _as_int))
        phi = bump_function(field.grid, self._windows(field.grid.dim), self._get("amplitude", 1.0))
        return IdentityCase(field, killing, phi)

    def _verify(self, check: Callable[[GraphField], VerificationReport],
                default_n: int = 41) -> Tuple[bool, Dict[str, Any]]:
        """Run a check, record the field table and an optional refinement study."""
        n = self._get("n", default_n, _as_int)
        field = self.field = self._field(n)
        report = check(field)
        for step, (key, value) in enumerate(report.residuals.items()):
            self.scenario_logger.log_step(step, report.name, {key: value})
        t = compute_tensors(field)
        self.tables["field"] = field.to_frame({"W": t.W, "H_field": t.H_field})

        result = report.to_dict()
        passed = report.passed
        sizes = self._get("refine", None, _as_ints)
        if sizes:
            def run(k: int) -> Dict[str, float]:
                rep = check(self._field(k))
                return dict(rep.residuals, h=max(rep.grid["spacing"]))
            study = refinement_study(run, sizes)
            result["refinement"] = study
            passed = passed and self._orders_ok(study)
        return passed, result

    def _h2_factor(self) -> float:
        return self.tolerances["identity_h2_factor"]

    def _verify_kato(self) -> Tuple[bool, Dict[str, Any]]:
        return self._verify(lambda field: kato_remainder_check(field, self._h2_factor()))

    def _verify_boundary(self) -> Tuple[bool, Dict[str, Any]]:
        def check(field: GraphField) -> VerificationReport:
            return boundary_identity_check(
                field, KillingField(self._get("killing_axis", 0, _as_int)),
                self._get("labels", None, _as_strs),
                self.tolerances["boundary_constancy_tol"], self._h2_factor(),
            )
        return self._verify(check)

    def _verify_picone(self) -> Tuple[bool, Dict[str, Any]]:
        def check(field: GraphField) -> VerificationReport:
            return picone_check(self._case(field), self._get("eps", 0.1), self._h2_factor())
        return self._verify(check)

    def _verify_poincare(self) -> Tuple[bool, Dict[str, Any]]:
        def check(field: GraphField) -> VerificationReport:
            return poincare_check(self._case(field), self.tolerances["cmc_tol"],
                                  self.tolerances["poincare_h2_factor"],
                                  self.tolerances["boundary_constancy_tol"])
        passed, result = self._verify(check)

        eps_values = self._get("eps_values", None, _as_floats)
        if eps_values:
            case = self._case(self.field)
            rows = poincare_epsilon_terms(case, sorted(eps_values, reverse=True), self.tolerances["cmc_tol"])
            monotone = all(
                later[key] <= earlier[key]
                for earlier, later in zip(rows[:-1], rows[1:])
                for key in ("cross_term", "killing_term", "square_term")
            )
            result["eps_terms"] = rows
            result["eps_monotone"] = monotone
            passed = passed and monotone
        return passed, result

    def _verify_jacobi(self) -> Tuple[bool, Dict[str, Any]]:
        def check(field: GraphField) -> VerificationReport:
            axis = self._get("killing_axis", None, _as_int)
            killing = KillingField(axis) if axis is not None else None
            return jacobi_check(field, killing, self.tolerances["cmc_tol"], self._h2_factor())
        return self._verify(check)

    def _verify_z(self) -> Tuple[bool, Dict[str, Any]]:
        def check(field: GraphField) -> VerificationReport:
            return z_inequality_check(field, self._get("C"), self._get("kappa", 0.0), None,
                                      self.tolerances["cmc_tol"], self.tolerances["z_slack_tol"],
                                      self._h2_factor())
        return self._verify(check)

    def _verify_gradient_bound(self) -> Tuple[bool, Dict[str, Any]]:
        shape = self._get("problem", "slab", _as_str)
        n = self._get("n", 1000, _as_int)
        report, _ = self._run_solve(shape, n)
        if not report.converged:
            raise PreconditionError("Gradient bound needs a converged solve", {"message": report.message})
        kappa = self._get("kappa", 0.0)
        m = report.spec.domain.base.dim
        if self._get("menu", False, _as_bool):
            choices = [(entry.label, entry.C, entry.A) for entry in admissible_menu(m, kappa, report.spec.H)]
        else:
            choices = [("given", self._get("C"), self._get("A"))]

        rows = []
        for label, C, A in choices:
            bound = verify_gradient_bound(report, kappa, C, A, self.tolerances["gradient_num_tol"])
            rows.append(dict(bound.to_dict(), label=label))
        self.tables["gradient_bound"] = pd.DataFrame(rows)
        self.tables["solution"] = report.to_frame()
        result = {"solve": report.to_dict(), "bounds": rows}
        return all(row["verdict"] == "pass" for row in rows), result

    # ------------------------------------------------------------------
    # parabolic

    def _parabolic_check(self) -> Tuple[bool, Dict[str, Any]]:
        kind = self._get("domain", kind=_as_str)
        m = self._get("m", 2, _as_int)
        if kind == "half_space":
            domain = ModelDomain.half_space(EuclideanMetric(m))
        elif kind == "slab":
            domain = ModelDomain.slab(EuclideanMetric(m), self._get("T", 1.0))
        elif kind == "hyperbolic":
            # Growth of geodesic balls only depends on the base.
            base = make_metric("hyperbolic", m, self._get("kappa"))
            domain = ModelDomain.ball(base, self._get("s_max", 1e4))
        else:
            raise ConfigurationError(f"Unknown domain '{kind}'", {"section": "inputs", "key": "domain"})
        mode = self._get("mode", "surface", _as_str)
        s_max = self._get("s_max", 1e4)
        outcome = parabolicity_criterion(
            domain, model_growth(domain, mode), mode,
            s_max=s_max, s0=self._get("s0", 1.0),
            fit_tol=self.tolerances["parabolic_fit_tol"],
        )
        expect = self._get("expect", None, _as_str)
        result = dict(outcome.to_dict(), domain=domain.describe())
        passed = expect is None or outcome.verdict.value == expect
        return passed, result

def run_scenario(scenario: Scenario, output_dir: Optional[str] = None,
                 log_dir: Optional[str] = None) -> Tuple[str, int, str]:
    """
    Run one scenario in a fresh engine; the batch runner's worker.

    Returns:
        Tuple of (scenario name, exit status, status string)
    """
    engine = ScenarioEngine(scenario, output_dir=output_dir, log_dir=log_dir)
    exit_code = engine.run()
    return scenario.name, exit_code, engine.status
