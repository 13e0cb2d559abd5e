"""Tests for the model base metrics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geometry.base_metric import (EuclideanMetric, HyperbolicMetric, MetricKind, ProductLineMetric,
                                  make_metric, metric_eval, warp, warp_derivative)
from utils.error_utils import ArgumentError, DomainError

def koszul_christoffel(metric, point, step=1e-5):
    """γ^k_ij from central differences of σ."""
    m = metric.dim
    dsigma = np.zeros((m, m, m))
    for l in range(m):
        shift = np.zeros(m)
        shift[l] = step
        dsigma[l] = (metric.metric_at(point + shift) - metric.metric_at(point - shift)) / (2 * step)
    sigma_inv = np.linalg.inv(metric.metric_at(point))
    lowered = 0.5 * (np.einsum("ilj->lij", dsigma) + np.einsum("jli->lij", dsigma) - dsigma)
    return np.einsum("kl,lij->kij", sigma_inv, lowered)

def test_euclidean_metric_is_flat():
    metric = EuclideanMetric(3)
    points = np.random.default_rng(0).normal(size=(4, 3))
    assert np.allclose(metric.metric_field(points), np.eye(3))
    assert not np.any(metric.christoffel_field(points))
    assert np.allclose(metric.volume_density(points), 1.0)
    assert metric.ricci_lower_bound == 0.0

def test_hyperbolic_plane_closed_forms():
    metric = HyperbolicMetric(2, 1.0)
    sigma, gamma = metric_eval(metric, (0.5, 1.0))
    assert sigma == pytest.approx(np.diag([1.0, math.sinh(0.5) ** 2]))
    assert gamma[0, 1, 1] == pytest.approx(-math.sinh(0.5) * math.cosh(0.5))
    assert gamma[1, 0, 1] == pytest.approx(1.0 / math.tanh(0.5))
    assert gamma[1, 1, 0] == pytest.approx(1.0 / math.tanh(0.5))
    assert metric.volume_density(np.array([0.5, 1.0])) == pytest.approx(math.sinh(0.5))

@settings(max_examples=30, deadline=None)
@given(
    r=st.floats(0.3, 2.0),
    theta=st.floats(0.3, 2.8),
    phi=st.floats(-3.0, 3.0),
    kappa=st.floats(0.2, 2.0),
)
def test_hyperbolic_christoffel_matches_metric_derivatives(r, theta, phi, kappa):
    metric = HyperbolicMetric(3, kappa)
    point = np.array([r, theta, phi])
    gamma = metric.christoffel_at(point)
    assert np.allclose(gamma, np.swapaxes(gamma, 1, 2))
    assert np.allclose(gamma, koszul_christoffel(metric, point), atol=1e-5, rtol=1e-5)

def test_warp_reduces_to_identity_on_flat_bases():
    r = np.linspace(0.0, 2.0, 5)
    assert np.array_equal(warp(0.0, r), r)
    assert np.allclose(warp_derivative(0.0, r), 1.0)
    assert np.allclose(warp(2.0, r), np.sinh(2.0 * r) / 2.0)

def test_invalid_parameters_are_rejected():
    with pytest.raises(ArgumentError):
        EuclideanMetric(1)
    with pytest.raises(ArgumentError):
        EuclideanMetric(2, curvature=-1.0)
    with pytest.raises(ArgumentError):
        HyperbolicMetric(2, 0.0)
    with pytest.raises(ArgumentError):
        make_metric("spherical", 2)

def test_polar_chart_excludes_the_pole():
    metric = HyperbolicMetric(2, 1.0)
    with pytest.raises(DomainError):
        metric.metric_field(np.array([[0.0, 1.0]]))
    with pytest.raises(DomainError):
        metric.metric_field(np.array([0.5, 1.0, 2.0]))

def test_hyperbolic_ricci_term_attains_the_bound():
    metric = HyperbolicMetric(3, 0.5)
    du_sq = np.array([0.0, 1.0, 4.0])
    W = np.sqrt(1.0 + du_sq)
    expected = -2 * 0.25 * du_sq / W ** 2
    assert np.allclose(metric.ricci_normal(du_sq, W), expected)
    assert np.allclose(EuclideanMetric(3).ricci_normal(du_sq, W), 0.0)

def test_killing_axes():
    assert HyperbolicMetric(3, 1.0).is_killing_axis(2)
    assert not HyperbolicMetric(3, 1.0).is_killing_axis(0)
    assert all(EuclideanMetric(2).is_killing_axis(axis) for axis in (0, 1))

def test_make_metric_kinds():
    assert make_metric("hyperbolic", 2, 1.0) == HyperbolicMetric(2, 1.0)
    assert isinstance(make_metric(MetricKind.PRODUCT_LINE, 3), ProductLineMetric)
    assert make_metric("euclidean", 2).describe() == {"kind": "euclidean", "dim": 2, "kappa": 0.0}
