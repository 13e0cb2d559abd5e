"""Tests for graph tensors, graph operators and the field factory."""

import numpy as np
import pytest

from graph.field_factory import (hemisphere_field, polynomial_field, radial_hyperbolic_field,
                                 slab_solution_field, strip_profile_field, tilted_profile_field)
from graph.operators import (cmc_residual, graph_laplacian, lw_operator, require_cmc,
                             z_inequality_check)
from graph.tensors import compute_tensors, contact_angle, normal_norm_sq
from profiles.capillary_profile import CapillaryProfile
from profiles.radial_profile import RadialProfile
from profiles.tilted_profile import TiltedProfile
from utils.error_utils import ArgumentError, DomainError, PreconditionError

@pytest.fixture
def hyperbolic_field():
    return radial_hyperbolic_field(RadialProfile(2, 1.0, 0.5), 81)

def test_hemisphere_has_constant_mean_curvature():
    field = hemisphere_field(81, m=2, H=1.0, radius=0.5)
    t = compute_tensors(field)
    H, deviation = cmc_residual(field, t)
    assert H == pytest.approx(1.0, abs=1e-3)
    assert deviation < 1e-3

def test_strip_profile_has_constant_mean_curvature(strip_field):
    t = compute_tensors(strip_field)
    assert require_cmc(strip_field, t, 1.0, 1e-4) == 1.0

def test_radial_hyperbolic_graph_has_constant_mean_curvature(hyperbolic_field):
    t = compute_tensors(hyperbolic_field)
    H, deviation = cmc_residual(hyperbolic_field, t, H=0.5)
    assert deviation < 1e-4

def test_pointwise_algebraic_identities(hyperbolic_field):
    t = compute_tensors(hyperbolic_field)
    assert np.allclose(normal_norm_sq(t), 1.0)
    assert np.allclose(t.grad_norm_sq, (t.W ** 2 - 1.0) / t.W ** 2)
    assert np.allclose(np.einsum("...ij,...jk->...ik", t.g, t.g_inv), np.eye(2), atol=1e-12)

def test_laplacian_annihilates_constants(hyperbolic_field):
    ones = np.ones(hyperbolic_field.grid.shape)
    assert np.allclose(graph_laplacian(hyperbolic_field, ones), 0.0)
    assert np.allclose(lw_operator(hyperbolic_field, ones), 0.0)

def test_laplacian_of_height_is_mean_curvature_over_w(strip_field):
    # Δ_g u = H/W on a graph of mean curvature H.
    t = compute_tensors(strip_field)
    mask = strip_field.interior_mask()
    residual = graph_laplacian(strip_field, strip_field.u, t) - t.H_field / t.W
    assert np.max(np.abs(residual[mask])) < 1e-10

def test_contact_angle_on_a_strip(strip_field, strip_profile):
    t = compute_tensors(strip_field)
    gamma, deviation = contact_angle(strip_field, t, "t=0")
    assert np.allclose(gamma, strip_profile.gamma, atol=1e-4)
    assert np.max(deviation) < 1e-10

def test_non_cmc_field_fails_the_precondition():
    field = polynomial_field(41, [[1.0, 0.3], [0.3, -0.5]], [2.0, 1.0])
    with pytest.raises(PreconditionError):
        require_cmc(field, compute_tensors(field), None, 1e-4)

def test_z_inequality_on_a_cmc_strip(strip_field):
    report = z_inequality_check(strip_field, C=0.0, kappa=0.0)
    assert report.passed
    assert report.details["min_slack"] >= -1e-6

def test_z_inequality_on_hyperbolic_graph(hyperbolic_field):
    report = z_inequality_check(hyperbolic_field, C=1.0, kappa=1.0)
    assert report.passed

def test_z_inequality_rejects_kappa_below_base_curvature(hyperbolic_field):
    with pytest.raises(PreconditionError):
        z_inequality_check(hyperbolic_field, C=1.0, kappa=0.5)

def test_strip_wider_than_profile_interval():
    profile = CapillaryProfile(1.0, 0.0, -0.2)
    with pytest.raises(DomainError):
        strip_profile_field(profile, profile.t_max + 0.1, 21)

def test_tilted_field_needs_odd_node_count():
    profile = TiltedProfile(0.0, 0.0, -0.5, 1.0, 0.0)
    with pytest.raises(ArgumentError):
        tilted_profile_field(profile, 20)
    field = tilted_profile_field(profile, 21)
    assert field.grid.shape == (41, 21)
    assert np.any(field.boundary_mask("graph"))

def test_slab_solution_field_embeds_nodal_values():
    nodes = np.linspace(0.0, 0.4, 17)
    field = slab_solution_field(nodes, nodes ** 2)
    assert field.grid.shape == (17, 5)
    assert np.allclose(field.u[:, 2], nodes ** 2)
    assert field.domain.extent == pytest.approx(0.4)

def test_hemisphere_box_must_stay_in_the_cap():
    with pytest.raises(ArgumentError):
        hemisphere_field(21, m=2, H=1.0, radius=1.5)
