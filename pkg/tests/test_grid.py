"""Tests for grids, graph fields and the finite-difference stencils."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geometry.base_metric import EuclideanMetric
from geometry.model_domain import ModelDomain
from graph.finite_differences import gradient, hessian, second_derivative
from graph.grid import Grid, GraphField
from utils.error_utils import ArgumentError, DataError
from utils.report_utils import observed_order

coefficient = st.floats(-3.0, 3.0)

def test_grid_geometry():
    grid = Grid.uniform((0.0, -1.0), (1.0, 1.0), (11, 21))
    assert grid.spacing == pytest.approx((0.1, 0.1))
    assert grid.coords.shape == (11, 21, 2)
    assert grid.trapezoid_weights().sum() == pytest.approx(2.0)
    assert grid.margin_mask(2).sum() == 7 * 17

def test_grid_validation():
    with pytest.raises(ArgumentError):
        Grid.uniform((0.0,), (1.0,), (4,))
    with pytest.raises(ArgumentError):
        Grid.uniform((1.0,), (0.0,), (9,))
    with pytest.raises(ArgumentError):
        Grid.uniform((0.0, 0.0), (1.0,), (9, 9))

@settings(max_examples=25, deadline=None)
@given(a=coefficient, b=coefficient, c=coefficient, d=coefficient, e=coefficient)
def test_stencils_are_exact_on_quadratics(a, b, c, d, e):
    grid = Grid.uniform((-1.0, -0.5), (1.0, 1.5), (9, 13))
    x, y = grid.coords[..., 0], grid.coords[..., 1]
    f = a * x * x + b * x * y + c * y * y + d * x + e * y
    df = gradient(f, grid.spacing)
    assert np.allclose(df[..., 0], 2 * a * x + b * y + d, atol=1e-9)
    assert np.allclose(df[..., 1], b * x + 2 * c * y + e, atol=1e-9)
    hess = hessian(f, grid.spacing)
    expected = np.array([[2 * a, b], [b, 2 * c]])
    assert np.allclose(hess, expected, atol=1e-8)

def test_second_derivative_converges_at_second_order():
    errors, spacings = [], []
    for n in (41, 81, 161):
        x = np.linspace(0.0, 1.0, n)
        h = x[1] - x[0]
        errors.append(np.max(np.abs(second_derivative(np.sin(3 * x), h, 0) + 9 * np.sin(3 * x))))
        spacings.append(h)
    assert observed_order(spacings, errors) >= 1.8

def test_second_derivative_needs_four_nodes():
    with pytest.raises(ValueError):
        second_derivative(np.zeros(3), 0.1, 0)

def test_graph_field_validation():
    domain = ModelDomain.strip(1.0)
    grid = Grid.uniform((0.0, -0.5), (1.0, 0.5), (11, 11))
    with pytest.raises(ArgumentError):
        GraphField(domain, grid, np.zeros((11, 10)))
    values = np.zeros((11, 11))
    values[3, 3] = np.nan
    with pytest.raises(DataError):
        GraphField(domain, grid, values)
    with pytest.raises(ArgumentError):
        GraphField(ModelDomain.ball(EuclideanMetric(3), 1.0), grid, np.zeros((11, 11)))

def test_field_values_are_frozen():
    domain = ModelDomain.strip(1.0)
    grid = Grid.uniform((0.0, -0.5), (1.0, 0.5), (11, 11))
    field = GraphField.from_function(domain, grid, lambda x: x[..., 0] ** 2)
    with pytest.raises(ValueError):
        field.u[0, 0] = 1.0

def test_boundary_nodes_of_a_strip():
    domain = ModelDomain.strip(1.0)
    grid = Grid.uniform((0.0, -0.5), (1.0, 0.5), (11, 11))
    field = GraphField(domain, grid, np.zeros(grid.shape))
    nodes = field.boundary_nodes("t=0")
    assert nodes[0].sum() == 7
    assert not nodes[1:].any()
    assert field.grid_aligned("t=T")

def test_field_table_columns():
    domain = ModelDomain.strip(1.0)
    grid = Grid.uniform((0.0, -0.5), (1.0, 0.5), (5, 5))
    field = GraphField.from_function(domain, grid, lambda x: x[..., 0] + 2 * x[..., 1])
    frame = field.to_frame({"W": np.ones(grid.shape)})
    assert list(frame.columns) == ["x0", "x1", "u", "W"]
    assert len(frame) == 25
    assert np.allclose(frame["u"], frame["x0"] + 2 * frame["x1"])
