import numpy as np
import pytest

from entbounds.linalg import DensityMatrix, SystemSignature
from entbounds.states import PureState


def rand_density(rng, dims, rank=None):
    """Random density matrix of the given subsystem dimensions and rank."""
    d = int(np.prod(dims))
    r = rank or d
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    mat = g @ g.conj().T
    mat /= np.trace(mat).real
    return DensityMatrix(mat, SystemSignature(dims))


def rand_pure(rng, n_qubits):
    d = 2 ** n_qubits
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v), n_qubits)


def rand_product_mixture(rng, n_terms=3):
    """Two-qubit separable state: convex mixture of random product states."""
    d = 4
    mat = np.zeros((d, d), dtype=complex)
    probs = rng.uniform(0.1, 1.0, n_terms)
    probs /= probs.sum()
    for p in probs:
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        mat += p * np.outer(v, v.conj())
    return DensityMatrix(mat, SystemSignature((2, 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def bell_state():
    return PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), 2)
