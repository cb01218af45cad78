"""Asymmetry (coherence) functionals relative to time translations.

All quantities are in the units of ``H`` (hbar = 1).
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .config import DEFAULT
from .distinguishability import check_order
from .errors import QSLError, SupportError
from .linalg import commutator, support_power, trace_norm
from .states import DensityMatrix, Hamiltonian


def _check(rho: DensityMatrix, h: Hamiltonian) -> None:
    h.check_dim(rho.dim)


def _expect(rho: DensityMatrix, op: np.ndarray) -> float:
    return float(np.real(np.trace(rho.matrix @ op)))


def level_populations(rho: DensityMatrix, h: Hamiltonian):
    """``[(energy, population)]`` for every distinct level of ``h``."""
    _check(rho, h)
    return [(e, _expect(rho, p)) for e, p in h.projectors]


@dataclass(frozen=True)
class EnergyStats:
    e_av: float
    delta_e: float
    e_min: float
    e_max: float


def energy_stats(rho: DensityMatrix, h: Hamiltonian, tol_supp: float = None) -> EnergyStats:
    """Mean energy, energy uncertainty and the extreme occupied levels.

    A level is occupied when its population exceeds ``tol_supp``
    (default ``rho.tol.supp``).
    """
    _check(rho, h)
    tol_supp = rho.tol.supp if tol_supp is None else tol_supp
    e_av = _expect(rho, h.matrix)
    shifted = h.matrix - e_av * np.eye(h.dim)
    var = max(0.0, _expect(rho, shifted @ shifted))
    occupied = [e for e, p in level_populations(rho, h) if p > tol_supp]
    return EnergyStats(e_av, float(np.sqrt(var)), min(occupied), max(occupied))


def a_min_max(rho: DensityMatrix, h: Hamiltonian, tol_supp: float = None):
    """(E_av - E_min, E_max - E_av), each clipped at zero against rounding."""
    st = energy_stats(rho, h, tol_supp)
    return max(0.0, st.e_av - st.e_min), max(0.0, st.e_max - st.e_av)


def f_measure(rho: DensityMatrix, h: Hamiltonian) -> float:
    """Trace norm of the commutator [H, rho]."""
    _check(rho, h)
    return trace_norm(commutator(h.matrix, rho.matrix))


def skew_information(rho: DensityMatrix, h: Hamiltonian) -> float:
    """Wigner-Yanase skew information tr(H^2 rho) - tr(sqrt(rho) H sqrt(rho) H).

    Evaluated as ||[H, sqrt(rho)]||_F^2 / 2, which is the same number and is
    non-negative by construction.
    """
    _check(rho, h)
    c = commutator(h.matrix, rho.sqrt)
    return 0.5 * float(np.real(np.vdot(c, c)))


def dyson_skew(rho: DensityMatrix, h: Hamiltonian, s: float) -> float:
    """Dyson generalisation -tr([rho^s, H][rho^(1-s), H]).

    For ``s > 1`` the two powers move in opposite directions and the trace
    changes sign, so the magnitude is returned; the result is non-negative
    and non-increasing under TI channels for every admissible order. For
    ``s > 1`` the negative power is taken on the support of ``rho``. If
    ``rho`` is rank-deficient and ``H`` couples its support to the kernel the
    formula is singular and :class:`SupportError` is raised.
    """
    s = check_order(s)
    _check(rho, h)
    spec = rho.spectrum
    if s > 1:
        lam = spec.clamped(rho.tol.clamp)
        kernel = spec.eigenvectors[:, lam <= 0]
        if kernel.shape[1]:
            supp = spec.eigenvectors[:, lam > 0]
            leak = np.linalg.norm(kernel.conj().T @ h.matrix @ supp)
            if leak > rho.tol.gap * max(1.0, np.linalg.norm(h.matrix)):
                raise SupportError(
                    f"rank-deficient state with H coupling support to kernel (|PHQ|={leak:.3e})")
    a = commutator(support_power(spec, s), h.matrix)
    b = commutator(support_power(spec, 1 - s), h.matrix)
    val = -np.real(np.trace(a @ b))
    return float(val if s < 1 else -val)


@dataclass
class MeasureReport:
    delta_e: float
    e_av: float
    e_min: float
    e_max: float
    a_min: float
    a_max: float
    f_h: float
    s_h: float
    s_h_dyson: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)

    def check(self, scale: float = 1.0) -> None:
        slack = 1e-9 * max(1.0, scale)
        if self.f_h > 2 * self.delta_e + slack:
            raise QSLError(f"F_H={self.f_h} exceeds 2*dE={2 * self.delta_e}")
        if self.s_h > self.delta_e ** 2 + slack:
            raise QSLError(f"S_H={self.s_h} exceeds dE^2={self.delta_e ** 2}")
        if min(self.a_min, self.a_max) < -1e-12:
            raise QSLError("negative A_min/A_max")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["s_h_dyson"] = {f"{k:g}": v for k, v in self.s_h_dyson.items()}
        return d


def measure_report(rho: DensityMatrix, h: Hamiltonian, orders=(0.5,)) -> MeasureReport:
    st = energy_stats(rho, h)
    a_min, a_max = a_min_max(rho, h)
    report = MeasureReport(
        delta_e=st.delta_e,
        e_av=st.e_av,
        e_min=st.e_min,
        e_max=st.e_max,
        a_min=a_min,
        a_max=a_max,
        f_h=f_measure(rho, h),
        s_h=skew_information(rho, h),
        s_h_dyson={float(s): dyson_skew(rho, h, s) for s in orders},
        thresholds={"supp": rho.tol.supp, "gap": h.tol.gap, "clamp": rho.tol.clamp},
    )
    report.check(np.linalg.norm(h.matrix, 2) ** 2)
    return report
