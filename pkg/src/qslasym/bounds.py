"""Quantum speed limits and their comparison against solved times.

Four lower bounds on the evolution time are evaluated: the energy-variance
bound pi/(2 dE), the mean-energy bound pi/(2 A_min) and its H -> -H mirror
pi/(2 A_max), plus the two coherence-based bounds eps/F_H (trace distance)
and sqrt(1 - exp(-eps/2))/sqrt(S_H) (Renyi-1/2 divergence). Zero
denominators give ``math.inf``.
"""

import csv
import io
import math
from dataclasses import dataclass, field

from .config import DEFAULT
from .distinguishability import RENYI_HALF, TRACE
from .errors import InvalidEpsilon
from .evolution import TauResult, default_horizon, solve_tau
from .measures import a_min_max, energy_stats, f_measure, skew_information
from .states import DensityMatrix, Hamiltonian


def _ratio(num: float, den: float, tol: float) -> float:
    return math.inf if den <= tol else num / den


def mt_bound(rho: DensityMatrix, h: Hamiltonian, tol=DEFAULT) -> float:
    return _ratio(math.pi, 2 * energy_stats(rho, h).delta_e, tol.zero)


def ml_bound(rho: DensityMatrix, h: Hamiltonian, tol=DEFAULT) -> float:
    return _ratio(math.pi, 2 * a_min_max(rho, h)[0], tol.zero)


def ml_max_variant(rho: DensityMatrix, h: Hamiltonian, tol=DEFAULT) -> float:
    return _ratio(math.pi, 2 * a_min_max(rho, h)[1], tol.zero)


def l1_bound(rho: DensityMatrix, h: Hamiltonian, epsilon: float, tol=DEFAULT) -> float:
    """epsilon / F_H(rho), for epsilon in (0, 2]."""
    if not 0 < epsilon <= 2:
        raise InvalidEpsilon(f"trace-distance epsilon must lie in (0, 2], got {epsilon}")
    return _ratio(epsilon, f_measure(rho, h), tol.zero)


def renyi_bound(rho: DensityMatrix, h: Hamiltonian, epsilon: float, tol=DEFAULT) -> float:
    """sqrt(1 - exp(-epsilon/2)) / sqrt(S_H(rho)); epsilon may be ``math.inf``."""
    if not epsilon > 0:
        raise InvalidEpsilon(f"Renyi epsilon must be positive, got {epsilon}")
    s_h = skew_information(rho, h)
    if s_h <= tol.zero:
        return math.inf
    return math.sqrt(-math.expm1(-epsilon / 2)) / math.sqrt(s_h)


def tightness(bound: float, tau: TauResult):
    """bound / t_star, or None when either side is infinite."""
    if not tau.reached or not math.isfinite(bound):
        return None
    return bound / tau.t_star


@dataclass
class BoundReport:
    tau_perp: TauResult
    tau_l1: TauResult
    tau_renyi: TauResult
    epsilon_l1: float
    epsilon_renyi: float
    mt_bound: float
    ml_bound: float
    ml_max_variant: float
    l1_bound: float
    renyi_bound: float
    delta_e: float
    f_h: float
    s_h: float
    purity: float
    dim: int
    tightness: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def violations(self, slack: float = 1e-5):
        """Names of finite bounds exceeding their solved time by more than ``slack``."""
        pairs = [
            ("mt", self.mt_bound, self.tau_perp),
            ("ml", self.ml_bound, self.tau_perp),
            ("ml_max", self.ml_max_variant, self.tau_perp),
            ("l1", self.l1_bound, self.tau_l1),
            ("renyi", self.renyi_bound, self.tau_renyi),
        ]
        return [n for n, b, t in pairs if t.reached and math.isfinite(b) and b > t.t_star + slack]

    def as_dict(self) -> dict:
        def num(x):
            return None if x is None else (x if math.isfinite(x) else "inf")

        return {
            "dim": self.dim,
            "purity": self.purity,
            "delta_e": self.delta_e,
            "f_h": self.f_h,
            "s_h": self.s_h,
            "epsilon_l1": self.epsilon_l1,
            "epsilon_renyi": num(self.epsilon_renyi),
            "mt_bound": num(self.mt_bound),
            "ml_bound": num(self.ml_bound),
            "ml_max_variant": num(self.ml_max_variant),
            "l1_bound": num(self.l1_bound),
            "renyi_bound": num(self.renyi_bound),
            "tau_perp": self.tau_perp.as_dict(),
            "tau_l1": self.tau_l1.as_dict(),
            "tau_renyi": self.tau_renyi.as_dict(),
            "tightness": {k: (v if v is not None else "N/A") for k, v in self.tightness.items()},
            "tolerances": self.tolerances,
        }


CSV_COLUMNS = ["state_id", "dim", "purity", "dE", "F_H", "S_H", "tau_perp", "tau_l1", "tau_renyi",
               "mt", "ml", "ml_max", "l1", "renyi", "eps_l1", "eps_renyi"]


def bound_report(rho: DensityMatrix, h: Hamiltonian, epsilon_l1: float = 1.0,
                 epsilon_renyi: float = 1.0, horizon: float = None, t_tol: float = None,
                 tol=DEFAULT) -> BoundReport:
    """All bounds next to the solved times they bound.

    tau_perp is solved with the trace distance at 2 - ``tol.tau_perp_eps``.
    """
    if horizon is None:
        horizon = default_horizon(rho, h, tol) or None
    kw = dict(horizon=horizon, t_tol=t_tol, tol=tol)
    tau_perp = solve_tau(rho, h, TRACE, 2.0 - tol.tau_perp_eps, **kw)
    tau_l1 = solve_tau(rho, h, TRACE, epsilon_l1, **kw)
    tau_ren = solve_tau(rho, h, RENYI_HALF, epsilon_renyi, **kw)
    rep = BoundReport(
        tau_perp=tau_perp,
        tau_l1=tau_l1,
        tau_renyi=tau_ren,
        epsilon_l1=epsilon_l1,
        epsilon_renyi=epsilon_renyi,
        mt_bound=mt_bound(rho, h, tol),
        ml_bound=ml_bound(rho, h, tol),
        ml_max_variant=ml_max_variant(rho, h, tol),
        l1_bound=l1_bound(rho, h, epsilon_l1, tol),
        renyi_bound=renyi_bound(rho, h, epsilon_renyi, tol),
        delta_e=energy_stats(rho, h).delta_e,
        f_h=f_measure(rho, h),
        s_h=skew_information(rho, h),
        purity=rho.purity,
        dim=rho.dim,
        tolerances=tol.as_dict(),
    )
    rep.tightness = {
        "mt": tightness(rep.mt_bound, tau_perp),
        "ml": tightness(rep.ml_bound, tau_perp),
        "ml_max": tightness(rep.ml_max_variant, tau_perp),
        "l1": tightness(rep.l1_bound, tau_l1),
        "renyi": tightness(rep.renyi_bound, tau_ren),
    }
    return rep


def reports_to_csv(reports, ids=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for n, r in enumerate(reports):
        row = [ids[n] if ids else n, r.dim, r.purity, r.delta_e, r.f_h, r.s_h,
               r.tau_perp.tau, r.tau_l1.tau, r.tau_renyi.tau,
               r.mt_bound, r.ml_bound, r.ml_max_variant, r.l1_bound, r.renyi_bound,
               r.epsilon_l1, r.epsilon_renyi]
        w.writerow([x if isinstance(x, (str, int)) else format(float(x), ".17g") for x in row])
    return buf.getvalue()
