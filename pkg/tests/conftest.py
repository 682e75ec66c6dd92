import numpy as np
import pytest

from kerrdce import DickeSpace, FockSpace, ProductSpace


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance: end-to-end acceptance criteria (minutes-long runs)"
    )


@pytest.fixture
def fock8():
    return FockSpace(n_max=8)


@pytest.fixture
def qubit():
    return DickeSpace(n_qubits=1, k_max=1)


@pytest.fixture
def qubit_space(fock8, qubit):
    return ProductSpace(qubit, fock8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
