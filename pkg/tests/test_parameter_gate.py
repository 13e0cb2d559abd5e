"""Tests for the parameter gate of the gradient estimate."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import params.parameter_gate as parameter_gate
from params.parameter_gate import (CaseLabel, admissible_menu, certify, check_gate, check_hp,
                                   classify, gate_polynomial, minimal_admissible_A, perturb,
                                   perturbed_polynomial, sampling_oracle)
from utils.error_utils import ArgumentError, CapillaryLabError, PreconditionError

# Sampling misses the open end s -> 0 by up to |P'| ds; closer verdicts are not compared.
TIE_MARGIN = 1e-3

@settings(max_examples=200, deadline=None)
@given(
    m=st.integers(2, 6),
    kappa=st.sampled_from([0.0, 0.5, 1.0, 2.0]),
    H=st.floats(-3.0, 3.0),
    C=st.floats(0.0, 4.0),
    A=st.floats(1.0, 5.0),
)
def test_exact_gate_agrees_with_sampling(m, kappa, H, C, A):
    verdict, slack = check_gate(m, kappa, H, C, A)
    assume(abs(slack) > TIE_MARGIN)
    oracle_verdict, minimum = sampling_oracle(m, kappa, H, C, A, n_points=100_000)
    assert oracle_verdict == verdict
    assert minimum >= slack - 1e-12

@pytest.mark.slow
def test_exact_gate_agrees_with_sampling_on_full_sweep():
    rng = np.random.default_rng(20240611)
    disagreements = []
    for m, kappa in itertools.product(range(2, 7), [0.0, 0.5, 1.0, 2.0]):
        for H, C, A in zip(rng.uniform(-3, 3, 250), rng.uniform(0, 4, 250), rng.uniform(1, 5, 250)):
            verdict, slack = check_gate(m, kappa, H, C, A)
            if abs(slack) <= TIE_MARGIN:
                continue
            if sampling_oracle(m, kappa, H, C, A, n_points=1_000_000)[0] != verdict:
                disagreements.append((m, kappa, H, C, A))
    assert disagreements == []

def test_hp_condition_is_strict_for_positive_mean_curvature():
    assert not check_hp(2, 1.0, math.sqrt(2.0), 0.0)
    assert check_hp(2, 1.0, 0.0, 1.0)
    assert not check_hp(2, 1.0, 0.0, 0.5)

def test_flat_base_is_always_admissible():
    cert = certify(2, 0.0, 1.0, 0.0, 1.0)
    assert cert.gate_ok
    assert cert.slack == pytest.approx(0.5)
    assert cert.to_dict()["case_label"] == CaseLabel.H_POS_C_LARGE.value

def test_hyperbolic_minimal_without_exponent_is_rejected():
    cert = certify(2, 1.0, 0.0, 0.0, 1.0)
    assert not cert.hp_ok
    assert not cert.gate_ok
    assert cert.case_label is None

@pytest.mark.parametrize("m, kappa, H, C, A, label, verdict", [
    (3, 1.0, -1.0, 2.0, 1.0, CaseLabel.H_NONPOS, True),
    (2, 1.0, 4.0, 1.5, 1.0, CaseLabel.H_POS_C_LARGE, True),
    (2, 1.0, 2.0, 0.0, 1.0, CaseLabel.H_POS_C_SMALL_DISCRIMINANT, True),
    (2, 1.0, 1.5, 0.8, 2.0, CaseLabel.H_POS_C_SMALL_GENERIC, True),
    (2, 1.0, 1.5, 0.8, 1.0, CaseLabel.H_POS_C_SMALL_GENERIC, False),
])
def test_case_analysis(m, kappa, H, C, A, label, verdict):
    branch = classify(m, kappa, H, C, A)
    assert branch["case_label"] is label
    assert branch["verdict"] is verdict
    assert branch["branch_verdict"] == verdict

def test_classify_requires_hp():
    with pytest.raises(PreconditionError):
        classify(2, 1.0, 0.0, 0.5, 1.0)

def test_argument_ranges():
    with pytest.raises(ArgumentError):
        check_gate(1, 0.0, 0.0, 0.0, 1.0)
    with pytest.raises(ArgumentError):
        check_gate(2, -1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ArgumentError):
        check_gate(2, 0.0, 0.0, -1.0, 1.0)
    with pytest.raises(ArgumentError):
        check_gate(2, 0.0, 0.0, 0.0, 0.5)

def test_gate_polynomial_coefficients():
    poly = gate_polynomial(3, 1.0, 2.0, 1.0)
    s = np.linspace(0.01, 1.0, 7)
    expected = 4.0 / 3.0 - 2.0 * s + (1.0 - 2.0) * (1.0 - s ** 2)
    assert np.allclose(poly(s), expected)

@pytest.mark.parametrize("m", range(2, 7))
@pytest.mark.parametrize("kappa", [0.0, 0.5, 1.0, 2.0])
@pytest.mark.parametrize("H", [-2.0, -0.5, 0.0, 0.5, 2.0])
def test_menu_rows_are_admissible(m, kappa, H):
    menu = admissible_menu(m, kappa, H)
    labels = [entry.label for entry in menu]
    assert "universal" in labels
    if kappa == 0.0:
        assert "flat_base" in labels
    if H == 0.0:
        minimal = next(entry for entry in menu if entry.label == "minimal")
        assert minimal.C == pytest.approx(math.sqrt(m - 1) * kappa)
    for entry in menu:
        assert certify(m, kappa, H, entry.C, entry.A).gate_ok
        assert entry.slack >= -1e-10

def test_minimal_admissible_A_is_sharp():
    A_min = minimal_admissible_A(2, 1.0, 1.5, 0.8)
    assert A_min == pytest.approx(1.0 / ((1.2 - math.sqrt(1.44 - 4 * 0.36 * 0.765)) / 0.72))
    assert check_gate(2, 1.0, 1.5, 0.8, A_min * (1 + 1e-9))[0]
    assert not check_gate(2, 1.0, 1.5, 0.8, A_min * (1 - 1e-6))[0]

def test_minimal_admissible_A_edge_cases():
    assert minimal_admissible_A(3, 1.0, -1.0, 2.0) == 1.0
    assert minimal_admissible_A(2, 1.0, 0.0, 0.0) is None

@pytest.mark.parametrize("m, kappa, H, C, A", [
    (3, 1.0, 0.0, 2.0, 1.0),
    (2, 0.0, 1.0, 0.0, 1.0),
    (2, 1.0, 1.5, 0.8, 2.0),
])
@pytest.mark.parametrize("eps", [0.5, 0.1, 0.01])
def test_perturbation_is_strictly_admissible(m, kappa, H, C, A, eps):
    p = perturb(m, kappa, H, C, A, eps)
    assert A < p.A1 < A + eps
    assert C < p.C2 < p.C1 < C + eps
    assert p.infimum > 0.0
    poly = perturbed_polynomial(m, kappa, H, p.C1, p.C2)
    s = np.linspace(0.0, 1.0 / p.A1, 100_001)[1:]
    assert np.min(poly(s)) >= p.infimum - 1e-12

@settings(max_examples=100, deadline=None)
@given(
    m=st.integers(2, 6),
    kappa=st.floats(0.0, 2.0),
    H=st.one_of(st.floats(-3.0, 0.0), st.floats(0.1, 3.0)),
    extra=st.floats(0.0, 2.0),
    eps=st.sampled_from([0.5, 0.1, 0.01]),
)
def test_perturbation_on_random_admissible_tuples(m, kappa, H, extra, eps):
    # C² ≥ (m−1)κ² keeps P ≥ H²/m − CH/A, so this A leaves slack H²/(2m) when H > 0.
    C = math.sqrt(m - 1) * kappa + extra
    A = 1.0 if H <= 0.0 else max(1.0, 2.0 * C * m / H)
    assert check_gate(m, kappa, H, C, A)[0]
    p = perturb(m, kappa, H, C, A, eps)
    assert A < p.A1 < A + eps
    assert C < p.C2 < p.C1 < C + eps
    assert p.infimum > 0.0
    poly = perturbed_polynomial(m, kappa, H, p.C1, p.C2)
    s = np.linspace(0.0, 1.0 / p.A1, 10_001)[1:]
    assert np.min(poly(s)) >= p.infimum - 1e-12

def test_perturbation_preconditions():
    with pytest.raises(ArgumentError):
        perturb(3, 1.0, 0.0, 2.0, 1.0, 0.0)
    with pytest.raises(PreconditionError):
        perturb(2, 1.0, 1.5, 0.8, 1.0, 0.1)

def test_tangent_gate_has_no_strict_perturbation():
    # m=2, κ=1, C=1/2: P has a double root at its vertex s* ≈ 0.447 for this H.
    lead = 1.0 - 0.25
    H = math.sqrt(lead / (0.5 - 0.25 / (4.0 * lead)))
    ok, slack = check_gate(2, 1.0, H, 0.5, 1.0)
    assert ok
    assert abs(slack) < 1e-12
    with pytest.raises(PreconditionError, match="tangent") as info:
        perturb(2, 1.0, H, 0.5, 1.0, 0.1)
    assert info.value.details["s"] == pytest.approx(0.5 * H / (2.0 * lead))
    # Past the vertex the interval no longer reaches the double root.
    assert perturb(2, 1.0, H, 0.5, 3.0, 0.1).infimum > 0.0

def test_menu_raises_on_a_failing_row(monkeypatch):
    monkeypatch.setattr(parameter_gate, "check_gate", lambda *args: (False, -1.0))
    with pytest.raises(CapillaryLabError, match="fails the gate") as info:
        admissible_menu(2, 0.0, 1.0)
    assert info.value.details["slack"] == -1.0
