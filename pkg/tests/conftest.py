import pytest

from microswim.connection import RestrictedShape
from microswim.dragmodel import DragParams, FluidParams, LinkGeometry


@pytest.fixture(scope="session")
def drag():
    """Default operating point: glycerin, 0.1 m half-length, SR 0.1."""
    return DragParams(FluidParams(0.95), LinkGeometry.from_slenderness(0.1, 0.1))


@pytest.fixture(scope="session")
def collinear():
    return RestrictedShape.collinear()
