import math
from typing import Callable

import numpy as np
import pytest

from models import Params, PrimitiveState


@pytest.fixture
def sv_params() -> Params:
    """Classical shallow water"""
    return Params(g=9.81, G=0.0, zeta=0.0)


@pytest.fixture
def gsv_params() -> Params:
    return Params(g=9.81, G=1.0, zeta=0.25)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_state(rng: np.random.Generator) -> Callable[..., PrimitiveState]:
    def make(h=(0.1, 10.0), s=(0.2, 5.0), u=(-3.0, 3.0)) -> PrimitiveState:
        return PrimitiveState(
            h=math.exp(rng.uniform(math.log(h[0]), math.log(h[1]))),
            u=float(rng.uniform(*u)),
            sxx=math.exp(rng.uniform(math.log(s[0]), math.log(s[1]))),
            szz=math.exp(rng.uniform(math.log(s[0]), math.log(s[1]))),
        )

    return make


@pytest.fixture
def rest() -> PrimitiveState:
    return PrimitiveState(h=1.0, u=0.0, sxx=1.0, szz=1.0)
