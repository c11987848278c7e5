"""Shared dense-matrix oracles for the test suite.

Everything here is built from explicit 2x2 arrays and np.kron so the tests
check the library against an independent construction, not against itself.
"""

import numpy as np
import pytest

SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(label: str) -> np.ndarray:
    """Kronecker product with site 0 as the leftmost factor."""
    out = np.array([[1.0 + 0j]])
    for ch in label:
        out = np.kron(out, SINGLE[ch])
    return out


def random_pure(n_sites: int, rng: np.random.Generator) -> np.ndarray:
    vec = rng.standard_normal(1 << n_sites) + 1j * rng.standard_normal(1 << n_sites)
    return vec / np.linalg.norm(vec)


def random_density(n_sites: int, rng: np.random.Generator) -> np.ndarray:
    dim = 1 << n_sites
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
