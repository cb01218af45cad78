"""Validated states and Hamiltonians, composite systems, incoherence tests."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import DEFAULT
from .errors import DimensionMismatch, NotPermutation, NotPositive, TraceNotOne, ValidationError
from .linalg import (
    SpectralDecomposition,
    as_matrix,
    commutator,
    eig_hermitian,
    sqrtm_psd,
    trace_norm,
    unitary_evolution,
)


class Hamiltonian:
    """Time-independent Hermitian generator with a cached spectrum (hbar = 1).

    The matrix is given in the computational basis and need not be diagonal.
    """

    def __init__(self, matrix, tol=DEFAULT):
        m = as_matrix(matrix)
        self.spectrum: SpectralDecomposition = eig_hermitian(m, tol.herm)
        self.matrix = 0.5 * (m + m.conj().T)
        self.tol = tol

    @classmethod
    def diagonal(cls, energies, tol=DEFAULT):
        return cls(np.diag(np.asarray(energies, dtype=float)), tol)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.spectrum.eigenvectors

    @property
    def spread(self) -> float:
        lam = self.eigenvalues
        return float(lam[-1] - lam[0])

    @cached_property
    def levels(self):
        """Distinct energy levels as ``(energy, eigenvector-column indices)``."""
        return self.spectrum.levels(self.tol.gap)

    @cached_property
    def projectors(self):
        """``(energy, projector)`` for each distinct level, ascending."""
        return self.spectrum.projectors(self.tol.gap)

    def evolution(self, t: float) -> np.ndarray:
        return unitary_evolution(self.spectrum, t)

    def to_eigenbasis(self, op) -> np.ndarray:
        v = self.eigenvectors
        return v.conj().T @ np.asarray(op) @ v

    def from_eigenbasis(self, op) -> np.ndarray:
        v = self.eigenvectors
        return v @ np.asarray(op) @ v.conj().T

    def check_dim(self, other_dim: int) -> None:
        if other_dim != self.dim:
            raise DimensionMismatch(f"Hamiltonian has dim {self.dim}, operand has dim {other_dim}")

    def scaled(self, c: float) -> "Hamiltonian":
        return Hamiltonian(c * self.matrix, self.tol)

    def __repr__(self):
        return f"Hamiltonian(dim={self.dim}, spectrum={np.round(self.eigenvalues, 6).tolist()})"


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Construction validates the input; tiny negative eigenvalues (above
    ``-tol.pos``) are clamped to zero and the state renormalised.
    """

    def __init__(self, matrix, tol=DEFAULT, _trusted=False):
        m = as_matrix(matrix)
        self.tol = tol
        if _trusted:
            self.matrix = m
            return
        spec = eig_hermitian(m, tol.herm)
        lam = spec.eigenvalues
        if lam[0] < -tol.pos:
            raise NotPositive(f"minimum eigenvalue {lam[0]:.3e} below {-tol.pos:.1e}")
        tr = float(np.sum(lam))
        if abs(tr - 1.0) > tol.trace:
            raise TraceNotOne(f"trace {tr!r} differs from 1 by more than {tol.trace:.1e}")
        if lam[0] < 0:
            lam = np.clip(lam, 0.0, None)
            m = spec.apply(lam / lam.sum())
        else:
            m = 0.5 * (m + m.conj().T)
        self.matrix = m

    @classmethod
    def pure(cls, vector, tol=DEFAULT) -> "DensityMatrix":
        """|psi><psi| from a (not necessarily normalised) state vector."""
        psi = np.asarray(vector, dtype=complex).ravel()
        n = np.linalg.norm(psi)
        if n == 0:
            raise ValidationError("zero state vector")
        psi = psi / n
        return cls(np.outer(psi, psi.conj()), tol, _trusted=True)

    @classmethod
    def maximally_mixed(cls, dim: int, tol=DEFAULT) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim, tol, _trusted=True)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> SpectralDecomposition:
        return eig_hermitian(self.matrix, max(self.tol.herm, 1e-8))

    @cached_property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    @cached_property
    def sqrt(self) -> np.ndarray:
        return sqrtm_psd(self.spectrum, self.tol.clamp)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.spectrum.clamped(self.tol.clamp) > 0))

    def is_pure(self, tol: float = 1e-9) -> bool:
        return abs(self.purity - 1.0) <= tol

    def mix(self, other: "DensityMatrix", p: float) -> "DensityMatrix":
        """p * self + (1 - p) * other."""
        return DensityMatrix(p * self.matrix + (1 - p) * other.matrix, self.tol, _trusted=True)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, purity={self.purity:.6g})"


def validate_state(matrix, tol=DEFAULT) -> DensityMatrix:
    """Validate a raw matrix as a density matrix (see :class:`DensityMatrix`)."""
    if isinstance(matrix, DensityMatrix):
        matrix = matrix.matrix
    return DensityMatrix(matrix, tol)


@dataclass(frozen=True)
class CompositeLabel:
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValidationError(f"factor dimensions must be positive, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))


def _matrix(x) -> np.ndarray:
    return x.matrix if isinstance(x, (DensityMatrix, Hamiltonian)) else np.asarray(x, dtype=complex)


def is_incoherent(rho, h: Hamiltonian, tol: float = DEFAULT.incoherent) -> bool:
    """True iff ||[H, rho]||_1 <= tol."""
    r = _matrix(rho)
    h.check_dim(r.shape[0])
    return trace_norm(commutator(h.matrix, r)) <= tol


def tensor_hamiltonian(h_a: Hamiltonian, h_b: Hamiltonian) -> Hamiltonian:
    """Non-interacting composite generator H_A (x) I + I (x) H_B."""
    ia = np.eye(h_a.dim)
    ib = np.eye(h_b.dim)
    return Hamiltonian(np.kron(h_a.matrix, ib) + np.kron(ia, h_b.matrix), h_a.tol)


def tensor_state(rho_a, rho_b) -> DensityMatrix:
    a, b = _matrix(rho_a), _matrix(rho_b)
    tol = rho_a.tol if isinstance(rho_a, DensityMatrix) else DEFAULT
    return DensityMatrix(np.kron(a, b), tol, _trusted=True)


def partial_trace(rho, label: CompositeLabel, keep: int) -> DensityMatrix:
    """Reduced state on factor ``keep`` of a multipartite system."""
    r = _matrix(rho)
    dims = label.dims
    if label.total != r.shape[0]:
        raise DimensionMismatch(f"label dims {dims} do not multiply to {r.shape[0]}")
    if not 0 <= keep < len(dims):
        raise DimensionMismatch(f"factor index {keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = r.reshape(dims + dims)
    # Move the kept row/column axes to the end, trace out the rest pairwise.
    order = [i for i in range(n) if i != keep]
    t = np.moveaxis(t, [keep, n + keep], [-2, -1])
    d_rest = int(np.prod([dims[i] for i in order])) if order else 1
    t = t.reshape(d_rest, d_rest, dims[keep], dims[keep])
    reduced = np.einsum("iijk->jk", t)
    tol = rho.tol if isinstance(rho, DensityMatrix) else DEFAULT
    return DensityMatrix(reduced, tol, _trusted=True)


def permutation_unitary(sigma) -> np.ndarray:
    """U_sigma = sum_i |sigma(i)><i| for a permutation given as an image list."""
    perm = [int(s) for s in sigma]
    d = len(perm)
    if d < 1 or sorted(perm) != list(range(d)):
        raise NotPermutation(f"{sigma!r} is not a permutation of 0..{d - 1}")
    u = np.zeros((d, d), dtype=complex)
    u[perm, np.arange(d)] = 1.0
    return u


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v
