import hypothesis
import numpy as np
import pytest

from models.domain import H2Params, Tolerances
from services.families import build_bjorck, build_fourier, build_h2

hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def tol():
    return Tolerances()


@pytest.fixture
def f6():
    return build_fourier(6)


@pytest.fixture
def c6():
    return build_bjorck()


@pytest.fixture
def generic_params():
    return H2Params.from_arg(0.7, 1.3, 0.4)


@pytest.fixture
def generic_h2(generic_params):
    return build_h2(generic_params)


def random_h2_params(rng, n):
    """n seeded parameter points with random branch signs."""
    out = []
    for _ in range(n):
        s2, s3, s4 = (int(v) for v in rng.choice([1, -1], size=3))
        out.append(H2Params.from_arg(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi),
                                     rng.uniform(0, 2 * np.pi), s2=s2, s3=s3, s4=s4))
    return out
