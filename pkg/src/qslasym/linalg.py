"""Dense complex-matrix kernel.

Hermitian eigendecomposition, spectral matrix functions, trace norm and
commutators. Every operator in the package (states, Hamiltonians, Kraus
operators, joint unitaries) is a plain ``numpy`` complex array.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DimensionMismatch, DomainError, NotHermitian, ValidationError


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite, square, complex 2-d array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def hermiticity_error(a: np.ndarray) -> float:
    """Max entry of |A - A^dag| relative to the max |A| entry."""
    scale = np.max(np.abs(a))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)) / scale)


def is_hermitian(a, tol: float = DEFAULT.herm) -> bool:
    return hermiticity_error(as_matrix(a)) <= tol


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, values) -> np.ndarray:
        """Return sum_k values[k] |v_k><v_k|."""
        v = self.eigenvectors
        return (v * np.asarray(values)) @ v.conj().T

    def clamped(self, rel: float = DEFAULT.clamp) -> np.ndarray:
        """Eigenvalues with |lambda| <= rel * max(1, ||A||) set to exactly 0."""
        lam = self.eigenvalues.copy()
        scale = max(1.0, float(np.max(np.abs(lam)))) if lam.size else 1.0
        lam[np.abs(lam) <= rel * scale] = 0.0
        return lam

    def levels(self, gap: float = DEFAULT.gap):
        """Group eigenvalue indices into distinct levels.

        Returns a list of ``(energy, indices)`` with energy the mean of the
        grouped eigenvalues. Consecutive eigenvalues closer than
        ``gap * max(1, spread)`` share a level.
        """
        lam = self.eigenvalues
        spread = float(lam[-1] - lam[0]) if lam.size else 0.0
        cut = gap * max(1.0, spread)
        groups = [[0]]
        for k in range(1, lam.size):
            if lam[k] - lam[groups[-1][-1]] <= cut:
                groups[-1].append(k)
            else:
                groups.append([k])
        return [(float(np.mean(lam[g])), np.array(g)) for g in groups]

    def projectors(self, gap: float = DEFAULT.gap):
        """Spectral projectors onto the distinct levels, ascending in energy."""
        v = self.eigenvectors
        return [(e, v[:, idx] @ v[:, idx].conj().T) for e, idx in self.levels(gap)]


def eig_hermitian(a, tol: float = DEFAULT.herm) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Raises
    ------
    NotHermitian
        If the relative anti-Hermitian part exceeds ``tol``.
    """
    m = as_matrix(a)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"relative Hermiticity error {err:.3e} exceeds {tol:.1e}")
    lam, vec = np.linalg.eigh(0.5 * (m + m.conj().T))
    return SpectralDecomposition(lam, vec)


def _spectrum(a) -> SpectralDecomposition:
    return a if isinstance(a, SpectralDecomposition) else eig_hermitian(a)


def matrix_function(a, f, clamp: float = DEFAULT.clamp) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    ``a`` may be a matrix or a precomputed :class:`SpectralDecomposition`.
    ``f`` is evaluated on the clamped eigenvalues (see
    :meth:`SpectralDecomposition.clamped`) and must return finite values.
    """
    spec = _spectrum(a)
    lam = spec.clamped(clamp)
    with np.errstate(all="ignore"):
        vals = np.asarray(f(lam), dtype=complex)
    if vals.shape != lam.shape:
        vals = np.array([complex(f(x)) for x in lam])
    if not np.all(np.isfinite(vals)):
        bad = lam[~np.isfinite(vals)]
        raise DomainError(f"function undefined at eigenvalue(s) {bad}")
    return spec.apply(vals)


def support_power(a, p: float, clamp: float = DEFAULT.clamp) -> np.ndarray:
    """Power ``a**p`` taken on the support: zero eigenvalues map to zero.

    Negative eigenvalues (after clamping) raise :class:`DomainError`.
    """
    spec = _spectrum(a)
    lam = spec.clamped(clamp)
    if np.any(lam < 0):
        raise DomainError("fractional power of a matrix with negative eigenvalues")
    vals = np.zeros_like(lam)
    on = lam > 0
    vals[on] = lam[on] ** p
    return spec.apply(vals)


def sqrtm_psd(a, clamp: float = DEFAULT.clamp) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix."""
    return support_power(a, 0.5, clamp)


def unitary_evolution(h, t: float) -> np.ndarray:
    """exp(-i H t) for Hermitian ``h`` (matrix or decomposition)."""
    spec = _spectrum(h)
    return spec.apply(np.exp(-1j * spec.eigenvalues * t))


def trace_norm(a) -> float:
    """Sum of singular values."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    if m.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def trace_norm_hermitian(stack: np.ndarray) -> np.ndarray:
    """Trace norm of a stack of Hermitian matrices, shape (..., d, d)."""
    return np.sum(np.abs(np.linalg.eigvalsh(stack)), axis=-1)


def commutator(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2:
        raise DimensionMismatch(f"cannot commute shapes {a.shape} and {b.shape}")
    return a @ b - b @ a
