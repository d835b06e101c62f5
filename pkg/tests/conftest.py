from __future__ import annotations

import numpy as np
import pytest
from oracles import SMALL_MANIFOLDS

from rcg.features.manifolds import Manifold
from rcg.infra import db


@pytest.fixture(params=SMALL_MANIFOLDS, ids=lambda m: m.kind)
def manifold(request: pytest.FixtureRequest) -> Manifold:
    return request.param


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _fresh_run_store():
    yield
    db.dispose()
