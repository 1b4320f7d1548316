import pytest

from lerc.core import Model
from lerc.riccati import solve_riccati


@pytest.fixture
def solved_14():
    return solve_riccati(Model(1.0, 1.0, 1.0), 4.0)
