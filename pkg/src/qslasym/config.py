"""Numerical tolerances shared by every module.

All thresholds live in one frozen record so reports can echo the exact
values used and acceptance runs can pin them.
"""

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # Hermiticity: max |A - A^dag| entry relative to max |A| entry.
    herm: float = 1e-10
    # Relative eigenvalue cut below which eigenvalues count as zero before powers.
    clamp: float = 1e-12
    # Density-matrix validation.
    pos: float = 1e-10
    trace: float = 1e-10
    # Population above which an energy level counts as occupied.
    supp: float = 1e-10
    # Eigenvalues closer than gap * max(1, spread) form one level.
    gap: float = 1e-9
    # ||[H, rho]||_1 below which a state counts as incoherent.
    incoherent: float = 1e-10
    # Trace-distance slack for the perfect-distinguishability predicate.
    perp: float = 1e-8
    # Trace-distance slack used to solve tau_perp (2 - tau_perp_eps).
    tau_perp_eps: float = 1e-12
    # Denominators below this give an infinite bound.
    zero: float = 1e-12
    # Kraus completeness residual.
    complete: float = 1e-9
    # Harmonic Kraus / covariance residual.
    harmonic: float = 1e-8
    # Per-Kraus incoherence residual.
    incoherent_kraus: float = 1e-9
    # Joint unitary checks.
    unitary: float = 1e-10
    energy_conservation: float = 1e-9
    # Bisection width for the tau solver.
    t_tol: float = 1e-6
    # Renyi epsilon used as a stand-in for infinity.
    eps_big: float = 80.0

    def as_dict(self):
        return asdict(self)

    def updated(self, **overrides):
        unknown = set(overrides) - set(asdict(self))
        if unknown:
            raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **overrides)


DEFAULT = Tolerances()
