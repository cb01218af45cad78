"""Seeded random states, Hamiltonians and TI channels for the property suites."""

import numpy as np

from .channels import constant_channel, dephasing_channel, haar_unitary, random_ti_channel
from .states import DensityMatrix, Hamiltonian


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_hamiltonian(dim: int, rng, kind: str = "generic") -> Hamiltonian:
    """``generic``: GUE-like; ``integer``: Haar-rotated integer spectrum (many
    resonances); ``diagonal``: random diagonal energies."""
    rng = rng_from(rng)
    if kind == "generic":
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return Hamiltonian(0.5 * (a + a.conj().T))
    if kind == "integer":
        energies = np.sort(rng.integers(0, 2 * dim, size=dim)).astype(float)
        u = haar_unitary(dim, rng)
        return Hamiltonian(u @ np.diag(energies) @ u.conj().T)
    if kind == "diagonal":
        return Hamiltonian.diagonal(np.sort(rng.uniform(-2, 2, size=dim)))
    raise ValueError(f"unknown Hamiltonian kind {kind!r}")


def random_pure_state(dim: int, rng) -> DensityMatrix:
    rng = rng_from(rng)
    return DensityMatrix.pure(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def random_density_matrix(dim: int, rng, rank: int = None) -> DensityMatrix:
    """Ginibre-ensemble state of the given rank (full rank by default)."""
    rng = rng_from(rng)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_state(dim: int, rng) -> DensityMatrix:
    """Pure with probability 1/4, otherwise mixed of random rank."""
    rng = rng_from(rng)
    if rng.random() < 0.25:
        return random_pure_state(dim, rng)
    return random_density_matrix(dim, rng, int(rng.integers(2, dim + 1)) if dim > 1 else 1)


def random_incoherent_state(h: Hamiltonian, rng) -> DensityMatrix:
    """State diagonal in the eigenbasis of ``h``."""
    rng = rng_from(rng)
    p = rng.dirichlet(np.ones(h.dim))
    return DensityMatrix(h.from_eigenbasis(np.diag(p)))


def random_ti_channel_mix(h: Hamiltonian, rng):
    """A TI channel drawn from dilations (mostly), dephasing or constant maps."""
    rng = rng_from(rng)
    u = rng.random()
    if u < 0.7:
        return random_ti_channel(h, int(rng.integers(2 ** 31)))
    if u < 0.85:
        return dephasing_channel(h)
    return constant_channel(random_incoherent_state(h, rng), h)
