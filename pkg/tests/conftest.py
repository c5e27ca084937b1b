import numpy as np
import pytest

from spinwitness.qcore import PureState


def haar_state(n_sites: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state on n_sites qubits."""
    dim = 2**n_sites
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(vec / np.linalg.norm(vec), n_sites)


def random_density(n_sites: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random full-rank (or rank-limited) density matrix."""
    dim = 2**n_sites
    rank = dim if rank is None else rank
    a = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = a @ a.conj().T
    return rho / rho.trace()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260808)
