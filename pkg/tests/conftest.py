"""Shared fixtures for the capillary lab tests."""

import pytest

from graph.field_factory import strip_profile_field
from identities.cases import IdentityCase, KillingField, bump_function
from profiles.capillary_profile import CapillaryProfile

STRIP_WIDTH = 0.3
STRIP_HALF_WIDTH = 0.2

@pytest.fixture
def strip_profile():
    return CapillaryProfile(H=1.0, b1=0.0, c1=-0.2)

@pytest.fixture
def strip_field(strip_profile):
    """CMC profile over the strip (0, 0.3) × ℝ, h = 0.005."""
    return strip_profile_field(strip_profile, STRIP_WIDTH, 61, STRIP_HALF_WIDTH)

@pytest.fixture
def strip_case(strip_field):
    """Strip field with X = ∂_t and a bump that is free across both boundary lines."""
    phi = bump_function(strip_field.grid, [None, (-0.12, 0.12)])
    return IdentityCase(strip_field, KillingField(0), phi)

@pytest.fixture
def isolated_logs(tmp_path):
    """Output and log directories inside the test's temporary directory."""
    out = tmp_path / "results"
    logs = tmp_path / "logs"
    return str(out), str(logs)
