import numpy as np
import pytest

from restless_sched import GeneratorParams, ModelInstance


@pytest.fixture
def two_state_instance() -> ModelInstance:
    """Hand-checked 2-state, 2-observation, 2-project instance.

    Ascending rows, strongly informative observations; verifies under
    the ascending regime with threshold K=2 at beta=0.5.
    """
    A = np.array([[0.9, 0.1], [0.2, 0.8]])
    B = np.array([[0.99, 0.01], [0.01, 0.99]])
    R = np.array([0.0, 1.0])
    x0 = [np.array([0.6, 0.4]), np.array([0.3, 0.7])]
    return ModelInstance(2, 2, 2, A, B, R, 0.5, x0)


@pytest.fixture
def small_params() -> GeneratorParams:
    return GeneratorParams()


def random_simplex(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.dirichlet(np.ones(dim))


def random_stochastic(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    M = rng.uniform(0.05, 1.0, (rows, cols))
    return M / M.sum(axis=1, keepdims=True)
