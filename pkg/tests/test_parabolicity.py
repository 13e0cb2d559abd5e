"""Tests for the volume-growth criterion."""

import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from geometry.base_metric import EuclideanMetric, HyperbolicMetric
from geometry.model_domain import ModelDomain
from geometry.parabolicity import (ParabolicityVerdict, model_growth, parabolicity_criterion,
                                   unit_ball_volume)
from utils.error_utils import ArgumentError, DataError

def run(domain, mode="surface", s_max=1e4):
    return parabolicity_criterion(domain, model_growth(domain, mode), mode, s_max=s_max)

def test_unit_ball_volumes():
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)

def test_half_plane_satisfies_the_criterion():
    result = run(ModelDomain.half_space(EuclideanMetric(2)))
    assert result.verdict is ParabolicityVerdict.CRITERION_SATISFIED
    assert result.tail_exponent == pytest.approx(1.0, abs=1e-6)

def test_half_plane_volume_mode():
    result = run(ModelDomain.half_space(EuclideanMetric(2)), mode="volume")
    assert result.verdict is ParabolicityVerdict.CRITERION_SATISFIED
    assert result.tail_exponent == pytest.approx(2.0, abs=1e-6)

def test_three_dimensional_half_space_fails():
    result = run(ModelDomain.half_space(EuclideanMetric(3)))
    assert result.verdict is ParabolicityVerdict.CRITERION_NOT_SATISFIED
    assert result.tail_exponent == pytest.approx(2.0, abs=1e-6)

def test_slab_in_three_dimensions_grows_like_a_plane():
    result = run(ModelDomain.slab(EuclideanMetric(3), 1.0))
    assert result.verdict is ParabolicityVerdict.CRITERION_SATISFIED
    assert result.tail_exponent == pytest.approx(1.0, abs=0.01)

def test_hyperbolic_growth_is_exponential():
    base = HyperbolicMetric(2, 1.0)
    domain = ModelDomain.ball(base, 20.0)
    result = run(domain, s_max=20.0)
    assert result.verdict is ParabolicityVerdict.CRITERION_NOT_SATISFIED
    assert result.to_dict()["verdict"] == "criterion_not_satisfied"

def test_window_validation():
    domain = ModelDomain.half_space(EuclideanMetric(2))
    growth = model_growth(domain, "surface")
    with pytest.raises(ArgumentError):
        parabolicity_criterion(domain, growth, "surface", s_max=5.0)
    with pytest.raises(ArgumentError):
        parabolicity_criterion(domain, growth, "surface", s_max=100.0, s0=0.0)
    with pytest.raises(DataError):
        parabolicity_criterion(domain, lambda s: np.zeros_like(s), "surface", s_max=100.0)

def test_strip_growth_matches_circle_arcs():
    domain = ModelDomain.strip(1.0)
    s = np.array([0.25, 0.5, 2.0, 40.0])
    alpha = np.arcsin(np.minimum(1.0, 0.5 / s))
    assert np.allclose(model_growth(domain, "surface")(s), 4.0 * s * alpha, rtol=1e-10)
    area = 2.0 * s ** 2 * (alpha + np.sin(alpha) * np.cos(alpha))
    assert np.allclose(model_growth(domain, "volume")(s), area, rtol=1e-10)

def test_unknown_growth_mode():
    domain = ModelDomain.half_space(EuclideanMetric(2))
    with pytest.raises(ArgumentError, match="Unknown growth mode"):
        model_growth(domain, "area")

@pytest.mark.parametrize("m", [2, 3, 4])
def test_slab_growth_quadrature_is_clean(m):
    domain = ModelDomain.slab(EuclideanMetric(m), 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for mode in ("surface", "volume"):
            assert np.all(model_growth(domain, mode)(np.geomspace(0.1, 1e3, 30)) > 0.0)
