import numpy as np
import pytest

from mtjsim import DemagTensor, DeviceParams, StepperConfig


@pytest.fixture(scope="session")
def table_device() -> DeviceParams:
    """The default 40 nm disk with its published parameter set."""
    return DeviceParams()


@pytest.fixture(scope="session")
def iso_demag() -> DemagTensor:
    return DemagTensor.isotropic()


@pytest.fixture(scope="session")
def zero_demag() -> DemagTensor:
    return DemagTensor(0.0, 0.0, 0.0)


@pytest.fixture
def stepper() -> StepperConfig:
    return StepperConfig()


@pytest.fixture
def cold_device() -> DeviceParams:
    """Table parameters at T = 0 for deterministic runs."""
    return DeviceParams(t_k=0.0)


def random_unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
