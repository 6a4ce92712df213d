from __future__ import annotations

import numpy as np
import pytest

from slapprox import BinomialOpinion


def random_valid_opinions(rng: np.random.Generator, count: int) -> list[BinomialOpinion]:
    """Opinions uniform on the simplex with uniform priors, as the harness draws them."""
    masses = rng.dirichlet((1.0, 1.0, 1.0), size=count)
    priors = rng.uniform(size=count)
    return [BinomialOpinion(b, d, u, a) for (b, d, u), a in zip(masses, priors)]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
