import numpy as np
import pytest

from gptdisc import Ensemble, polygon_model


def random_polygon_ensemble(rng: np.random.Generator) -> Ensemble:
    """Random mixed states on a random polygon model with random priors."""
    order = int(rng.integers(3, 9))
    model = polygon_model(order)
    n_states = int(rng.integers(2, 7))
    weights = rng.random((n_states, order))
    weights /= weights.sum(axis=1, keepdims=True)
    priors = rng.random(n_states)
    priors /= priors.sum()
    return Ensemble(model=model, states=weights @ model.state_gens, priors=priors)


@pytest.fixture
def triangle_model():
    return polygon_model(3)


@pytest.fixture
def square_model():
    return polygon_model(4)
