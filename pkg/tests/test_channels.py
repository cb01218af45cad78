import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qslasym.channels import (
    StinespringDilation,
    apply_channel,
    compose,
    constant_channel,
    dephasing_channel,
    dilation_residuals,
    dilation_to_channel,
    energy_blocks,
    harmonic_residual,
    identity_channel,
    incoherence_residual,
    probe_states,
    random_energy_conserving_unitary,
    random_ti_channel,
    unitary_channel,
    verify_incoherent,
    verify_ti,
)
from qslasym.errors import InvalidDilation, MissingCertificate, NotIncoherentTarget, NotTracePreserving
from qslasym.sampling import random_hamiltonian, random_state
from qslasym.states import DensityMatrix, Hamiltonian, is_incoherent, permutation_unitary

seeds = st.integers(0, 2 ** 32 - 1)


class TestSimpleChannels:
    def test_identity(self, plus, qubit_h):
        ch = identity_channel(2)
        np.testing.assert_allclose(apply_channel(ch, plus).matrix, plus.matrix)
        assert verify_ti(ch, qubit_h) < 1e-12

    def test_dephasing(self, plus, qubit_h):
        out = apply_channel(dephasing_channel(qubit_h), plus)
        np.testing.assert_allclose(out.matrix, np.eye(2) / 2, atol=1e-15)
        assert harmonic_residual(dephasing_channel(qubit_h), qubit_h) < 1e-12

    def test_dephasing_keeps_degenerate_coherence(self):
        h = Hamiltonian.diagonal([0, 0, 1])
        rho = DensityMatrix.pure([1, 1, 1])
        out = apply_channel(dephasing_channel(h), rho).matrix
        assert abs(out[0, 1]) == pytest.approx(1 / 3)
        assert abs(out[0, 2]) < 1e-15

    def test_constant(self, plus, qubit_h):
        sigma = DensityMatrix(np.diag([0.25, 0.75]))
        ch = constant_channel(sigma, qubit_h)
        np.testing.assert_allclose(apply_channel(ch, plus).matrix, sigma.matrix, atol=1e-14)
        assert ch.completeness_residual < 1e-12
        assert harmonic_residual(ch, qubit_h) < 1e-12

    def test_constant_needs_incoherent_target(self, plus, qubit_h):
        with pytest.raises(NotIncoherentTarget):
            constant_channel(plus, qubit_h)

    def test_not_trace_preserving(self, plus):
        with pytest.raises(NotTracePreserving):
            apply_channel(unitary_channel(0.5 * np.eye(2)), plus)


class TestDilation:
    def test_block_structure(self, qubit_h):
        dil = random_energy_conserving_unitary(qubit_h, qubit_h, seed=3)
        assert dil.block_sizes == [1, 2, 1]
        unit, cons = dilation_residuals(dil, qubit_h)
        assert unit < 1e-12 and cons < 1e-12

    def test_deterministic(self, qubit_h):
        a = random_energy_conserving_unitary(qubit_h, qubit_h, seed=11)
        b = random_energy_conserving_unitary(qubit_h, qubit_h, seed=11)
        c = random_energy_conserving_unitary(qubit_h, qubit_h, seed=12)
        assert np.array_equal(a.joint_unitary, b.joint_unitary)
        assert not np.allclose(a.joint_unitary, c.joint_unitary)

    def test_kraus_frequencies(self, qubit_h):
        dil = random_energy_conserving_unitary(qubit_h, qubit_h, seed=5, env_initial_index=1)
        ch = dilation_to_channel(dil, qubit_h)
        assert set(np.round(ch.omega, 12)) <= {-1.0, 0.0}
        assert ch.completeness_residual < 1e-12
        assert harmonic_residual(ch, qubit_h) < 1e-12

    def test_rejects_non_conserving(self, qubit_h):
        swap_sys = np.kron(np.array([[0, 1], [1, 0]]), np.eye(2))
        with pytest.raises(InvalidDilation):
            dilation_to_channel(StinespringDilation(qubit_h, swap_sys, 0), qubit_h)

    def test_rejects_bad_index(self, qubit_h):
        with pytest.raises(InvalidDilation):
            random_energy_conserving_unitary(qubit_h, qubit_h, 0, env_initial_index=2)

    def test_energy_blocks(self):
        blocks = energy_blocks(np.array([1.0, 0.0, 1.0, 2.0]))
        assert [sorted(b.tolist()) for b in blocks] == [[1], [0, 2], [3]]


class TestVerification:
    def test_permutation_is_not_covariant(self):
        h = Hamiltonian.diagonal([0.0, 1.3, 2.1])
        ch = unitary_channel(permutation_unitary([0, 2, 1]))
        assert verify_ti(ch, h) > 0.1
        # permutations keep incoherent states incoherent
        assert incoherence_residual(ch, h) < 1e-12

    def test_hadamard_creates_coherence(self, qubit_h):
        had = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        assert incoherence_residual(unitary_channel(had), qubit_h) > 0.5
        assert verify_ti(unitary_channel(had), qubit_h) > 0.1

    def test_missing_certificate(self, qubit_h):
        ch = unitary_channel(np.eye(2))
        with pytest.raises(MissingCertificate):
            harmonic_residual(ch, qubit_h)
        with pytest.raises(MissingCertificate):
            verify_incoherent(ch, qubit_h)

    def test_probe_count(self):
        for d in (1, 2, 3, 4):
            ps = probe_states(d)
            assert len(ps) == d * d
            assert all(abs(np.trace(p) - 1) < 1e-15 for p in ps)
            # they span the Hermitian matrices
            assert np.linalg.matrix_rank(np.array([p.ravel() for p in ps])) == d * d

    def test_composition(self, rng):
        h = random_hamiltonian(3, rng, "integer")
        a, b = random_ti_channel(h, 1), random_ti_channel(h, 2)
        ab = compose(a, b)
        rho = random_state(3, rng)
        np.testing.assert_allclose(apply_channel(ab, rho).matrix, apply_channel(a, apply_channel(b, rho)).matrix,
                                   atol=1e-12)
        assert harmonic_residual(ab, h) < 1e-8
        assert verify_ti(ab, h) < 1e-8


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4), st.sampled_from(["integer", "generic", "diagonal"]))
def test_random_dilation_is_ti(seed, d, kind):
    rng = np.random.default_rng(seed)
    h = random_hamiltonian(d, rng, kind)
    ch = random_ti_channel(h, int(rng.integers(2 ** 31)))
    assert ch.completeness_residual < 1e-9
    assert harmonic_residual(ch, h) < 1e-8
    assert verify_ti(ch, h) < 1e-8
    assert verify_incoherent(ch, h) < 1e-9


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4))
def test_ti_channels_preserve_incoherence(seed, d):
    rng = np.random.default_rng(seed)
    h = random_hamiltonian(d, rng, "integer")
    ch = random_ti_channel(h, int(rng.integers(2 ** 31)))
    rho = DensityMatrix(h.from_eigenbasis(np.diag(rng.dirichlet(np.ones(d)))))
    assert is_incoherent(apply_channel(ch, rho), h, 1e-9)
