import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qslasym.errors import DimensionMismatch, DomainError, NotHermitian
from qslasym.linalg import (
    commutator,
    eig_hermitian,
    matrix_function,
    support_power,
    trace_norm,
    unitary_evolution,
)


def random_hermitian(d, rng, scale=1.0):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (a + a.conj().T) / 2


def random_matrix(d, rng):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


class TestEigHermitian:
    def test_diagonal(self):
        spec = eig_hermitian(np.diag([2.0, 0.0, 1.0]))
        np.testing.assert_allclose(spec.eigenvalues, [0, 1, 2])
        np.testing.assert_allclose(np.abs(spec.eigenvectors), np.eye(3)[:, [1, 2, 0]], atol=1e-15)

    def test_pauli_x(self):
        spec = eig_hermitian([[0, 1], [1, 0]])
        np.testing.assert_allclose(spec.eigenvalues, [-1, 1], atol=1e-15)

    def test_random_reconstruction(self, rng):
        a = random_hermitian(8, rng)
        spec = eig_hermitian(a)
        assert np.linalg.norm(spec.reconstruct() - a) < 1e-10 * max(1, np.linalg.norm(a))
        v = spec.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(8))) < 1e-10

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            eig_hermitian([[0, 1], [0, 0]])

    def test_deterministic(self, rng):
        a = random_hermitian(5, rng)
        s1, s2 = eig_hermitian(a), eig_hermitian(a.copy())
        assert np.array_equal(s1.eigenvalues, s2.eigenvalues)
        assert np.array_equal(s1.eigenvectors, s2.eigenvectors)

    def test_levels_group_degenerate(self):
        spec = eig_hermitian(np.diag([1.0, 0.0, 1.0 + 1e-12, 3.0]))
        levels = spec.levels()
        assert [len(idx) for _, idx in levels] == [1, 2, 1]


class TestMatrixFunction:
    def test_identity_function(self, rng):
        a = random_hermitian(5, rng)
        np.testing.assert_allclose(matrix_function(a, lambda x: x), a, atol=1e-10)

    def test_sqrt(self):
        np.testing.assert_allclose(matrix_function(np.diag([4.0, 9.0]), np.sqrt), np.diag([2, 3]), atol=1e-14)

    def test_phase_at_pi(self):
        u = matrix_function(np.diag([0.0, 1.0]), lambda x: np.exp(-1j * x * np.pi))
        np.testing.assert_allclose(u, np.diag([1, -1]), atol=1e-15)

    def test_negative_power_at_zero_raises(self):
        with pytest.raises(DomainError):
            matrix_function(np.diag([1.0, 0.0]), lambda x: x ** -0.5)

    def test_clamping_makes_rank_deficient_sqrt_stable(self):
        a = np.diag([1.0, -1e-17])
        np.testing.assert_allclose(matrix_function(a, np.sqrt), np.diag([1, 0]))

    def test_support_power_zero_maps_to_zero(self):
        np.testing.assert_allclose(support_power(np.diag([0.25, 0.0]), -0.5), np.diag([2, 0]))


class TestTraceNorm:
    def test_zero(self):
        assert trace_norm(np.zeros((3, 3))) == 0

    def test_commutator_example(self):
        assert trace_norm([[0, -0.5], [0.5, 0]]) == pytest.approx(1.0, abs=1e-15)

    def test_hermitian_is_sum_abs_eigenvalues(self):
        assert trace_norm(np.diag([1, -2, 3])) == pytest.approx(6.0)


class TestCommutator:
    def test_self(self, rng):
        a = random_matrix(4, rng)
        np.testing.assert_allclose(commutator(a, a), 0, atol=1e-14)

    def test_two_by_two(self):
        plus = np.full((2, 2), 0.5)
        np.testing.assert_allclose(commutator(np.diag([0, 1]), plus), 0.5 * np.array([[0, -1], [1, 0]]))

    def test_diagonal_pair(self):
        np.testing.assert_allclose(commutator(np.diag([1, 2, 3]), np.diag([4, 5, 6])), 0)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            commutator(np.eye(2), np.eye(3))


seeds = st.integers(0, 2 ** 32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 16))
def test_reconstruction_property(seed, d):
    rng = np.random.default_rng(seed)
    a = random_hermitian(d, rng)
    spec = eig_hermitian(a)
    assert np.linalg.norm(spec.reconstruct() - a) <= 1e-10 * max(1, np.linalg.norm(a))


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 8), st.floats(-3, 3))
def test_trace_norm_is_a_norm(seed, d, c):
    rng = np.random.default_rng(seed)
    a, b = random_matrix(d, rng), random_matrix(d, rng)
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10
    assert trace_norm(c * a) == pytest.approx(abs(c) * trace_norm(a), abs=1e-10 * max(1, trace_norm(a)))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8))
def test_function_product(seed, d):
    rng = np.random.default_rng(seed)
    a = random_hermitian(d, rng)
    f, g = np.cos, lambda x: x ** 2 + 1
    lhs = matrix_function(a, f) @ matrix_function(a, g)
    rhs = matrix_function(a, lambda x: f(x) * g(x))
    assert np.max(np.abs(lhs - rhs)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 10), st.floats(-1e3, 1e3))
def test_evolution_is_unitary(seed, d, t):
    rng = np.random.default_rng(seed)
    u = unitary_evolution(random_hermitian(d, rng), t)
    assert np.linalg.norm(u.conj().T @ u - np.eye(d), 2) <= 1e-10
