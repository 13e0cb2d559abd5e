"""Tests for the Kato, boundary, Picone, Poincaré and Jacobi checks on CMC graphs."""

import numpy as np
import pytest

from graph.field_factory import (polynomial_field, radial_hyperbolic_field, strip_profile_field,
                                 tilted_profile_field)
from graph.grid import GraphField
from identities.boundary import boundary_identity_check
from identities.cases import IdentityCase, KillingField, bump, bump_function
from identities.jacobi import jacobi_check
from identities.kato import kato_remainder_check
from identities.picone import picone_check
from identities.poincare import poincare_check, poincare_epsilon_terms
from profiles.capillary_profile import CapillaryProfile
from profiles.radial_profile import RadialProfile
from profiles.tilted_profile import TiltedProfile
from utils.error_utils import ArgumentError, PreconditionError
from utils.report_utils import refinement_study

QUADRATIC = [[1.0, 0.3], [0.3, -0.5]]
LINEAR = [2.0, 1.0]

def test_bump_is_supported_in_its_window():
    x = np.linspace(-1.0, 1.0, 201)
    values = bump(x, -0.5, 0.5)
    assert np.all(values[np.abs(x) >= 0.5] == 0.0)
    assert values[100] == pytest.approx(np.exp(-1.0))
    with pytest.raises(ArgumentError):
        bump(x, 0.5, 0.5)

def test_test_function_must_vanish_near_free_faces(strip_field):
    with pytest.raises(ArgumentError):
        IdentityCase(strip_field, KillingField(0), np.ones(strip_field.grid.shape))
    with pytest.raises(ArgumentError):
        IdentityCase(strip_field, KillingField(0), np.ones((3, 3)))

def test_kato_identity_on_a_strip(strip_field):
    report = kato_remainder_check(strip_field)
    assert report.passed

def test_kato_identity_on_a_quadratic_graph():
    report = kato_remainder_check(polynomial_field(41, QUADRATIC, LINEAR))
    assert report.passed
    assert report.details["nodes"] > 0

def test_kato_residual_refines_at_second_order():
    def run(n):
        report = kato_remainder_check(polynomial_field(n, QUADRATIC, LINEAR))
        return dict(report.residuals, h=report.grid["spacing"][0])

    # Coarser grids are still pre-asymptotic (pairwise orders 1.5 and 1.8).
    study = refinement_study(run, [81, 161, 321])
    assert study["orders"]["kato"] >= 1.8

def test_boundary_identity_on_a_strip(strip_field):
    report = boundary_identity_check(strip_field, KillingField(0))
    assert report.passed
    assert set(report.residuals) == {"boundary:t=0", "boundary:t=T", "boundary"}

def test_boundary_identity_on_a_tilted_epigraph():
    field = tilted_profile_field(TiltedProfile(0.0, 0.0, -0.5, 1.0, 0.0), 21)
    report = boundary_identity_check(field, KillingField(0), labels=["graph"])
    assert report.passed

def test_boundary_identity_needs_constant_data(strip_field):
    s = strip_field.coords[..., 1]
    tilted = GraphField(strip_field.domain, strip_field.grid, strip_field.u + 0.1 * s)
    with pytest.raises(PreconditionError):
        boundary_identity_check(tilted, KillingField(0))

def test_picone_identity(strip_case):
    report = picone_check(strip_case, eps=0.1)
    assert report.passed
    assert set(report.details["boundary_terms"]) == {"t=0", "t=T"}

def test_picone_identity_with_interior_support(strip_field):
    phi = bump_function(strip_field.grid, [(0.05, 0.25), (-0.12, 0.12)])
    case = IdentityCase(strip_field, KillingField(1), phi)
    report = picone_check(case, eps=1.0)
    assert report.passed
    assert report.details["boundary_term"] == pytest.approx(0.0, abs=1e-12)

def test_picone_rejects_nonpositive_shift(strip_case):
    with pytest.raises(ArgumentError):
        picone_check(strip_case, eps=0.0)

def test_poincare_inequality_is_an_equality_on_a_strip(strip_case):
    report = poincare_check(strip_case)
    assert report.passed
    terms = report.details
    assert abs(terms["slack"]) <= 1e-8 * terms["rhs"]

def test_poincare_needs_positive_killing_angle(strip_field):
    phi = bump_function(strip_field.grid, [None, (-0.12, 0.12)])
    with pytest.raises(PreconditionError):
        poincare_check(IdentityCase(strip_field, KillingField(1), phi))

def test_poincare_needs_cmc_field():
    field = polynomial_field(41, QUADRATIC, LINEAR)
    phi = bump_function(field.grid, [(-0.5, 0.5), (-0.5, 0.5)])
    with pytest.raises(PreconditionError):
        poincare_check(IdentityCase(field, KillingField(0), phi))

def test_poincare_error_terms_decrease_with_shift(strip_case):
    rows = poincare_epsilon_terms(strip_case, [0.1, 0.01, 0.001])
    for key in ("cross_term", "killing_term", "square_term"):
        values = [row[key] for row in rows]
        assert values[0] > values[1] > values[2] >= 0.0
    with pytest.raises(ArgumentError):
        poincare_epsilon_terms(strip_case, [0.1, -0.1])

def test_jacobi_equations_on_a_strip(strip_field):
    report = jacobi_check(strip_field, KillingField(0))
    assert report.passed
    assert {"jacobi_vertical", "w_equation", "lw_w", "jacobi_killing", "lw_killing"} == set(report.residuals)

def test_jacobi_equations_on_hyperbolic_graph():
    field = radial_hyperbolic_field(RadialProfile(2, 1.0, 0.5), 81)
    assert jacobi_check(field, KillingField(1)).passed
    with pytest.raises(ArgumentError):
        jacobi_check(field, KillingField(0))

def test_jacobi_needs_cmc_field():
    with pytest.raises(PreconditionError):
        jacobi_check(polynomial_field(41, QUADRATIC, LINEAR))

@pytest.mark.slow
def test_jacobi_residuals_refine_at_second_order():
    profile = CapillaryProfile(1.0, 0.0, -0.2)

    def run(n):
        report = jacobi_check(strip_profile_field(profile, 0.3, n, 0.2), KillingField(0))
        return dict(report.residuals, h=report.grid["spacing"][0])

    study = refinement_study(run, [31, 61, 121])
    assert all(order >= 1.8 for order in study["orders"].values())
