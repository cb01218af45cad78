"""Translationally invariant (TI) channels.

A channel is TI when it commutes with time translation,
exp(-iHt) E(rho) exp(iHt) = E(exp(-iHt) rho exp(iHt)). TI channels are built
here from energy-conserving Stinespring dilations, whose Kraus operators
K_l = <E_l|V|E_0> each pick up a pure phase exp(i (E_l - E_0) t) under
translation (the "harmonic" property). Verification routines measure how
far an arbitrary Kraus set is from covariance, from the harmonic property,
and from mapping incoherent states to incoherent states Kraus by Kraus.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT
from .errors import (
    DimensionMismatch,
    InvalidDilation,
    MissingCertificate,
    NotIncoherentTarget,
    NotTracePreserving,
)
from .linalg import as_matrix, commutator, trace_norm
from .states import DensityMatrix, Hamiltonian, is_incoherent

DEFAULT_TIMES = (0.1, 1.0, 7.3, np.pi * np.sqrt(2.0), 2.5)


class QuantumChannel:
    """Kraus-form map rho -> sum_mu K_mu rho K_mu^dag on a single system.

    ``omega`` optionally certifies translation invariance: it lists one
    frequency per Kraus operator with exp(-iHt) K exp(iHt) = exp(i w t) K.
    """

    def __init__(self, kraus, omega=None, name: str = ""):
        ks = np.array([as_matrix(k) for k in kraus], dtype=complex)
        if ks.ndim != 3 or ks.shape[0] == 0:
            raise DimensionMismatch("need at least one square Kraus operator")
        if len({k.shape for k in ks}) != 1:
            raise DimensionMismatch("Kraus operators have differing shapes")
        self.kraus = ks
        self.omega = None if omega is None else np.asarray(omega, dtype=float).ravel()
        if self.omega is not None and len(self.omega) != len(ks):
            raise DimensionMismatch(f"{len(self.omega)} frequencies for {len(ks)} Kraus operators")
        self.name = name

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    @property
    def completeness_residual(self) -> float:
        s = np.einsum("kji,kjl->il", self.kraus.conj(), self.kraus)
        return float(np.linalg.norm(s - np.eye(self.dim)))

    def __call__(self, rho):
        return apply_channel(self, rho)

    def __repr__(self):
        cert = "certified" if self.omega is not None else "uncertified"
        return f"QuantumChannel({self.name or 'kraus'}, dim={self.dim}, n_kraus={len(self.kraus)}, {cert})"


@dataclass
class StinespringDilation:
    """Joint unitary on system (x) environment plus the initial environment level.

    ``env_initial_index`` indexes the ascending eigenvectors of the
    environment Hamiltonian.
    """

    env_hamiltonian: Hamiltonian
    joint_unitary: np.ndarray
    env_initial_index: int = 0
    block_sizes: list = field(default_factory=list)

    @property
    def env_dim(self) -> int:
        return self.env_hamiltonian.dim


def apply_channel(channel: QuantumChannel, rho, tol=DEFAULT) -> DensityMatrix:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (channel.dim, channel.dim):
        raise DimensionMismatch(f"channel dim {channel.dim} vs state shape {m.shape}")
    res = channel.completeness_residual
    if res > tol.complete:
        raise NotTracePreserving(f"completeness residual {res:.3e} exceeds {tol.complete:.1e}")
    k = channel.kraus
    out = np.einsum("kij,jl,kml->im", k, m, k.conj())
    return DensityMatrix(0.5 * (out + out.conj().T), getattr(rho, "tol", tol), _trusted=True)


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel([np.eye(dim)], [0.0], name="identity")


def unitary_channel(u, omega=None, name="unitary") -> QuantumChannel:
    return QuantumChannel([u], None if omega is None else [omega], name=name)


def dephasing_channel(h: Hamiltonian) -> QuantumChannel:
    """Projective measurement of the energy, outcome discarded."""
    projs = [p for _, p in h.projectors]
    return QuantumChannel(projs, np.zeros(len(projs)), name="dephasing")


def _energy_basis(h: Hamiltonian, sigma: np.ndarray):
    """Common eigenbasis of H and an operator commuting with it.

    Returns (energies, weights, vectors) with columns of definite energy.
    """
    energies, weights, vecs = [], [], []
    v = h.eigenvectors
    for e, idx in h.levels:
        vb = v[:, idx]
        lam, w = np.linalg.eigh(vb.conj().T @ sigma @ vb)
        energies.extend([e] * len(idx))
        weights.extend(lam)
        vecs.append(vb @ w)
    return np.array(energies), np.array(weights), np.hstack(vecs)


def constant_channel(sigma: DensityMatrix, h: Hamiltonian, tol=DEFAULT) -> QuantumChannel:
    """Discard the input and prepare the incoherent state ``sigma``.

    Kraus operators sqrt(p_j)|s_j><e_i| with |e_i>, |s_j> of definite energy,
    so the channel carries a TI certificate with w = E(e_i) - E(s_j).
    """
    h.check_dim(sigma.dim)
    if not is_incoherent(sigma, h, max(tol.incoherent, 1e-9)):
        raise NotIncoherentTarget("target state has coherence in the energy eigenbasis")
    v_in = h.eigenvectors
    e_in = h.eigenvalues
    e_out, p, s = _energy_basis(h, sigma.matrix)
    kraus, omega = [], []
    for j in range(len(p)):
        if p[j] <= tol.clamp:
            continue
        for i in range(h.dim):
            kraus.append(np.sqrt(p[j]) * np.outer(s[:, j], v_in[:, i].conj()))
            omega.append(e_in[i] - e_out[j])
    return QuantumChannel(kraus, omega, name="constant")


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def energy_blocks(energies: np.ndarray, gap: float = DEFAULT.gap):
    """Group indices of (unsorted) energies into near-degenerate blocks."""
    order = np.argsort(energies, kind="stable")
    spread = float(energies.max() - energies.min()) if energies.size else 0.0
    cut = gap * max(1.0, spread)
    blocks = [[order[0]]]
    for k in order[1:]:
        if energies[k] - energies[blocks[-1][-1]] <= cut:
            blocks[-1].append(k)
        else:
            blocks.append([k])
    return [np.array(b) for b in blocks]


def random_energy_conserving_unitary(h_sys: Hamiltonian, h_env: Hamiltonian, seed: int,
                                     env_initial_index: int = 0, tol=DEFAULT) -> StinespringDilation:
    """Haar-random unitary on each total-energy block of H_sys (x) I + I (x) H_env.

    Each block draws from its own child of ``SeedSequence(seed)``, so the
    result depends only on the seed and the block structure.
    """
    if not 0 <= env_initial_index < h_env.dim:
        raise InvalidDilation(f"env_initial_index {env_initial_index} out of range")
    e_tot = (h_sys.eigenvalues[:, None] + h_env.eigenvalues[None, :]).ravel()
    basis = np.kron(h_sys.eigenvectors, h_env.eigenvectors)
    blocks = energy_blocks(e_tot, tol.gap)
    children = np.random.SeedSequence(seed).spawn(len(blocks))
    v = np.zeros((len(e_tot), len(e_tot)), dtype=complex)
    for idx, child in zip(blocks, children):
        w = basis[:, idx]
        u = haar_unitary(len(idx), np.random.default_rng(child))
        v += w @ u @ w.conj().T
    return StinespringDilation(h_env, v, env_initial_index, [len(b) for b in blocks])


def dilation_residuals(dil: StinespringDilation, h_sys: Hamiltonian):
    """(unitarity residual, energy-conservation residual), Frobenius norms."""
    v = dil.joint_unitary
    n = h_sys.dim * dil.env_dim
    if v.shape != (n, n):
        raise InvalidDilation(f"joint unitary shape {v.shape}, expected {(n, n)}")
    h_tot = np.kron(h_sys.matrix, np.eye(dil.env_dim)) + np.kron(np.eye(h_sys.dim), dil.env_hamiltonian.matrix)
    unit = float(np.linalg.norm(v.conj().T @ v - np.eye(n)))
    cons = float(np.linalg.norm(commutator(v, h_tot)))
    return unit, cons


def dilation_to_channel(dil: StinespringDilation, h_sys: Hamiltonian, tol=DEFAULT) -> QuantumChannel:
    """Kraus operators K_l = <E_l|V|E_0> with frequencies w_l = E_l - E_0.

    Kraus operators that vanish identically are dropped.
    """
    unit, cons = dilation_residuals(dil, h_sys)
    if unit > tol.unitary * max(1.0, np.sqrt(len(dil.joint_unitary))):
        raise InvalidDilation(f"joint unitary not unitary (residual {unit:.3e})")
    scale = max(1.0, h_sys.spread + dil.env_hamiltonian.spread)
    if cons > tol.energy_conservation * scale:
        raise InvalidDilation(f"joint unitary does not conserve energy (residual {cons:.3e})")
    ds, de = h_sys.dim, dil.env_dim
    v4 = dil.joint_unitary.reshape(ds, de, ds, de)
    env_e = dil.env_hamiltonian.eigenvalues
    env_v = dil.env_hamiltonian.eigenvectors
    e0 = env_v[:, dil.env_initial_index]
    kraus, omega = [], []
    for l in range(de):
        k = np.einsum("m,ambn,n->ab", env_v[:, l].conj(), v4, e0)
        if np.linalg.norm(k) > 1e-13:
            kraus.append(k)
            omega.append(env_e[l] - env_e[dil.env_initial_index])
    return QuantumChannel(kraus, omega, name="dilation")


def random_ti_channel(h: Hamiltonian, seed: int, env_dim: int = None, tol=DEFAULT) -> QuantumChannel:
    """TI channel from a random dilation whose environment copies H's spectrum.

    Sharing the spectrum makes system and environment exchange energy
    resonantly, so the channel is far from a mere phase rotation.
    """
    env_dim = h.dim if env_dim is None else env_dim
    spec = np.resize(h.eigenvalues, env_dim)
    h_env = Hamiltonian.diagonal(spec, tol)
    start = int(np.random.default_rng(seed).integers(env_dim))
    dil = random_energy_conserving_unitary(h, h_env, seed, start, tol)
    return dilation_to_channel(dil, h, tol)


def compose(second: QuantumChannel, first: QuantumChannel) -> QuantumChannel:
    """second o first; frequencies add when both are certified."""
    if second.dim != first.dim:
        raise DimensionMismatch("cannot compose channels of different dimension")
    kraus = np.einsum("aij,bjk->abik", second.kraus, first.kraus).reshape(-1, first.dim, first.dim)
    omega = None
    if second.omega is not None and first.omega is not None:
        omega = (second.omega[:, None] + first.omega[None, :]).ravel()
    return QuantumChannel(kraus, omega, name=f"{second.name}*{first.name}")


def harmonic_residual(channel: QuantumChannel, h: Hamiltonian, times=DEFAULT_TIMES) -> float:
    """max over Kraus and t of ||exp(-iHt) K exp(iHt) - exp(i w t) K||_F."""
    if channel.omega is None:
        raise MissingCertificate("channel carries no harmonic frequencies")
    h.check_dim(channel.dim)
    worst = 0.0
    for t in times:
        u = h.evolution(t)
        rotated = u[None] @ channel.kraus @ u.conj().T[None]
        target = np.exp(1j * channel.omega * t)[:, None, None] * channel.kraus
        worst = max(worst, float(np.max(np.linalg.norm(rotated - target, axis=(1, 2)))))
    return worst


def probe_states(dim: int):
    """d^2 normalised Hermitian basis states: |i><i|, and |i>+|j>, |i>+i|j> projectors."""
    probes = []
    for i in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[i] = 1
        probes.append(np.outer(e, e))
    for i in range(dim):
        for j in range(i + 1, dim):
            for phase in (1.0, 1j):
                v = np.zeros(dim, dtype=complex)
                v[i], v[j] = 1 / np.sqrt(2), phase / np.sqrt(2)
                probes.append(np.outer(v, v.conj()))
    return probes


def verify_ti(channel: QuantumChannel, h: Hamiltonian, times=DEFAULT_TIMES) -> float:
    """Covariance residual max ||U_t E(rho) U_t^dag - E(U_t rho U_t^dag)||_1 over probes and t."""
    h.check_dim(channel.dim)
    k = channel.kraus

    def act(m):
        return np.einsum("kij,jl,kml->im", k, m, k.conj())

    worst = 0.0
    for t in times:
        u = h.evolution(t)
        ud = u.conj().T
        for p in probe_states(channel.dim):
            diff = u @ act(p) @ ud - act(u @ p @ ud)
            worst = max(worst, trace_norm(diff))
    return worst


def _incoherent_probes(h: Hamiltonian):
    """Spanning set of states block-diagonal across the distinct levels of H."""
    v = h.eigenvectors
    probes = []
    for _, idx in h.levels:
        vb = v[:, idx]
        for p in probe_states(len(idx)):
            probes.append(vb @ p @ vb.conj().T)
    return probes


def off_block(h: Hamiltonian, m: np.ndarray) -> np.ndarray:
    """Part of ``m`` coupling different energy levels."""
    return m - sum(p @ m @ p for _, p in h.projectors)


def incoherence_residual(channel: QuantumChannel, h: Hamiltonian) -> float:
    """max over incoherent probes and Kraus operators of ||offdiag(K rho K^dag)||_1.

    Zero means every Kraus branch maps incoherent states to incoherent states.
    Needs no certificate.
    """
    h.check_dim(channel.dim)
    worst = 0.0
    for p in _incoherent_probes(h):
        for k in channel.kraus:
            worst = max(worst, trace_norm(off_block(h, k @ p @ k.conj().T)))
    return worst


def verify_incoherent(channel: QuantumChannel, h: Hamiltonian) -> float:
    """Per-Kraus incoherence residual for a channel with a harmonic certificate."""
    if channel.omega is None:
        raise MissingCertificate("channel carries no harmonic frequencies")
    return incoherence_residual(channel, h)
