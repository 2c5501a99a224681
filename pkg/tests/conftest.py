import numpy as np
import pytest

from illposed import Stabilizer, build_problem


@pytest.fixture(scope="session")
def default_stab():
    return Stabilizer(1.0, 1.0)


@pytest.fixture(scope="session")
def linear_problems():
    return {name: build_problem(name, 64)
            for name in ("diag-unbounded", "volterra-int", "fredholm-gauss")}


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(20240911))
