"""Unitary orbits, the first-crossing time solver and speed functionals.

The orbit rho(t) = exp(-iHt) rho exp(iHt) is evaluated in the eigenbasis of
H, where it is an entrywise phase rotation, so whole time grids are computed
as one stacked array.

The solver scans a grid for the first time the distinguishability reaches
epsilon, then bisects. Between grid points it uses a rigorous bound on how
far the crossing margin can rise (a Lipschitz constant for the trace
distance, a curvature constant for the Renyi overlap) to decide where to
look closer, so a crossing hidden between two grid points is not skipped.
Infidelity and Renyi orders above 1 have no such bound; there only discrete
local maxima of the grid are refined.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .config import DEFAULT
from .distinguishability import OVERLAP_FLOOR, Measure, distance, renyi_relative_entropy
from .errors import InvalidEpsilon, InvalidHorizon, ValidationError
from .linalg import support_power, trace_norm_hermitian
from .measures import energy_stats, f_measure, skew_information
from .states import DensityMatrix, Hamiltonian

REACHED = "reached"
UNREACHED = "unreached_within_horizon"

_MAX_DEPTH = 8
_CHUNK = 256


def evolve(rho: DensityMatrix, h: Hamiltonian, t: float) -> DensityMatrix:
    """exp(-iHt) rho exp(iHt)."""
    h.check_dim(rho.dim)
    u = h.evolution(t)
    return DensityMatrix(u @ rho.matrix @ u.conj().T, rho.tol, _trusted=True)


class Orbit:
    """Batched evaluation of t -> D(rho, rho(t)) and of a crossing margin.

    ``margin(t) >= 0`` exactly when D(rho, rho(t)) >= epsilon. ``lipschitz``
    and ``curvature`` bound |margin'| and |margin''| when known (else None).
    """

    def __init__(self, rho: DensityMatrix, h: Hamiltonian, measure: Measure, epsilon: float,
                 tol=DEFAULT):
        h.check_dim(rho.dim)
        self.rho, self.h, self.measure, self.epsilon, self.tol = rho, h, measure, epsilon, tol
        e = h.eigenvalues
        self._omega = e[:, None] - e[None, :]
        self._r = h.to_eigenbasis(rho.matrix)
        self.lipschitz = None
        self.curvature = None
        f_h = f_measure(rho, h)
        # [H, rho] = 0 means rho(t) = rho for every t, whatever the measure.
        self.stationary = f_h <= tol.zero * max(1.0, h.spread)
        kind = measure.kind
        if kind in ("trace", "perp"):
            self.threshold = 2.0 - tol.tau_perp_eps if kind == "perp" else epsilon
            if kind == "perp" and epsilon > 1:
                self.threshold = math.inf
            self.lipschitz = f_h
        elif kind == "renyi" and measure.s < 1:
            s = measure.s
            a = support_power(self._r, s)
            b = support_power(self._r, 1 - s)
            # tr(A U B U^dag) = sum_ij A_ij B_ji exp(i w_ij t)
            self._c = a * b.T
            weight = np.abs(self._c)
            self.lipschitz = float(np.sum(weight * np.abs(self._omega)))
            self.curvature = float(np.sum(weight * self._omega ** 2))
            thr = math.exp((s - 1) * epsilon) if math.isfinite(epsilon) else 0.0
            self.q_threshold = max(thr, OVERLAP_FLOOR)
        elif kind == "infidelity":
            self._sqrt_r = support_power(self._r, 0.5)

    def states(self, times) -> np.ndarray:
        """rho(t) in the H eigenbasis, shape (len(times), d, d)."""
        t = np.asarray(times, dtype=float)
        return self._r[None] * np.exp(-1j * self._omega[None] * t[:, None, None])

    def _overlap(self, t: np.ndarray) -> np.ndarray:
        return np.real(np.einsum("ij,tij->t", self._c, np.exp(1j * self._omega[None] * t[:, None, None])))

    def values(self, times) -> np.ndarray:
        """D(rho, rho(t)) on a batch of times."""
        t = np.atleast_1d(np.asarray(times, dtype=float))
        kind = self.measure.kind
        if kind in ("trace", "perp"):
            d = trace_norm_hermitian(self._r[None] - self.states(t))
            if kind == "perp":
                d = (d >= 2.0 - self.tol.perp).astype(float)
            return d
        if kind == "renyi" and self.measure.s < 1:
            q = self._overlap(t)
            with np.errstate(divide="ignore"):
                out = np.log(np.maximum(q, OVERLAP_FLOOR)) / (self.measure.s - 1)
            out[q <= OVERLAP_FLOOR] = np.inf
            return np.maximum(out, 0.0)
        if kind == "infidelity":
            sr = self._sqrt_r
            m = sr[None] @ self.states(t) @ sr[None]
            lam = np.clip(np.linalg.eigvalsh(0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))), 0, None)
            fid = np.minimum(1.0, np.sum(np.sqrt(lam), axis=-1) ** 2)
            return np.maximum(0.0, 1.0 - fid)
        # Renyi order above 1: pointwise, support conditions checked each time.
        return np.array([renyi_relative_entropy(self._r, st, self.measure.s) for st in self.states(t)])

    def margin(self, times) -> np.ndarray:
        t = np.atleast_1d(np.asarray(times, dtype=float))
        kind = self.measure.kind
        if kind in ("trace", "perp"):
            return trace_norm_hermitian(self._r[None] - self.states(t)) - self.threshold
        if kind == "renyi" and self.measure.s < 1:
            return self.q_threshold - self._overlap(t)
        v = self.values(t)
        return np.where(np.isinf(v), 1.0, v - self.epsilon)

    def upper_bound(self, a, b, ha, hb):
        """Upper bound on the margin over [a, b] given its endpoint values."""
        w = b - a
        ub = np.inf
        if self.lipschitz is not None:
            ub = 0.5 * (ha + hb + self.lipschitz * w)
        if self.curvature is not None:
            ub = np.minimum(ub, np.maximum(ha, hb) + self.curvature * w * w / 8.0)
        return ub


@dataclass
class TauResult:
    status: str
    t_star: float
    bracket_width: float
    epsilon: float
    measure: Measure
    horizon: float
    grid_step: float = 0.0
    bound: str = "none"
    evaluations: int = 0

    @property
    def reached(self) -> bool:
        return self.status == REACHED

    @property
    def tau(self) -> float:
        """t_star, or +inf when not reached within the horizon."""
        return self.t_star if self.reached else math.inf

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "t_star": self.t_star if self.reached else None,
            "bracket_width": self.bracket_width,
            "epsilon": self.epsilon,
            "measure": str(self.measure),
            "horizon": self.horizon,
            "grid_step": self.grid_step,
            "between_grid_bound": self.bound,
            "evaluations": self.evaluations,
        }


def default_horizon(rho: DensityMatrix, h: Hamiltonian, tol=DEFAULT) -> float:
    """50 * pi / dE, or 0 for states with no energy spread."""
    de = energy_stats(rho, h).delta_e
    return 50.0 * math.pi / de if de > tol.zero else 0.0


def default_t_tol(h: Hamiltonian, tol=DEFAULT) -> float:
    spread = h.spread
    return tol.t_tol / spread if spread > tol.zero else tol.t_tol


class _Search:
    def __init__(self, orbit: Orbit, t_tol: float):
        self.orbit = orbit
        self.t_tol = t_tol
        self.evaluations = 0

    def h(self, t: float) -> float:
        self.evaluations += 1
        return float(self.orbit.margin([t])[0])

    def maximize(self, a: float, b: float):
        res = minimize_scalar(lambda t: -self.h(t), bounds=(a, b), method="bounded",
                              options={"xatol": min(1e-11, self.t_tol * 1e-3)})
        return float(res.x), -float(res.fun)

    def refine(self, a, b, ha, hb, depth=0):
        """Earliest bracket (lo, hi) in [a, b] with margin(lo) < 0 <= margin(hi)."""
        if self.orbit.upper_bound(a, b, ha, hb) < 0:
            return None
        if depth >= _MAX_DEPTH or b - a <= self.t_tol:
            tm, hm = self.maximize(a, b)
            return (a, tm) if hm >= 0 else None
        m = 0.5 * (a + b)
        hm = self.h(m)
        if hm >= 0:
            return a, m
        return self.refine(a, m, ha, hm, depth + 1) or self.refine(m, b, hm, hb, depth + 1)

    def bisect(self, lo, hi):
        while hi - lo > self.t_tol:
            mid = 0.5 * (lo + hi)
            if self.h(mid) >= 0:
                hi = mid
            else:
                lo = mid
        return lo, hi


def _grid_step(orbit: Orbit, horizon: float) -> float:
    if orbit.measure.kind in ("trace", "perp") and orbit.lipschitz > 0:
        eps = min(orbit.threshold, 2.0)
        return min(eps / (2.0 * orbit.lipschitz), horizon / 1000.0)
    return horizon / 2000.0


def solve_tau(rho: DensityMatrix, h: Hamiltonian, measure: Measure, epsilon: float,
              horizon: float = None, t_tol: float = None, tol=DEFAULT) -> TauResult:
    """Minimum t > 0 with D(rho, rho(t)) >= epsilon, searched on [0, horizon].

    ``horizon`` defaults to 50 pi / dE and ``t_tol`` to ``tol.t_tol`` divided
    by the spectral spread of H. The returned ``t_star`` satisfies the
    crossing condition exactly and its bracket partner ``t_star -
    bracket_width`` does not.
    """
    if not (epsilon > 0):
        raise InvalidEpsilon(f"epsilon must be positive, got {epsilon}")
    if horizon is None:
        horizon = default_horizon(rho, h, tol)
    elif not (horizon > 0 and math.isfinite(horizon)):
        raise InvalidHorizon(f"horizon must be positive and finite, got {horizon}")
    if t_tol is None:
        t_tol = default_t_tol(h, tol)
    elif not t_tol > 0:
        raise ValidationError(f"t_tol must be positive, got {t_tol}")

    orbit = Orbit(rho, h, measure, epsilon, tol)
    result = TauResult(UNREACHED, math.inf, 0.0, epsilon, measure, horizon)
    if horizon == 0:
        return result
    if orbit.stationary or (orbit.lipschitz is not None and orbit.lipschitz <= tol.zero):
        return result
    if orbit.curvature is not None:
        result.bound = "curvature"
    elif orbit.lipschitz is not None:
        result.bound = "lipschitz"

    dt = _grid_step(orbit, horizon)
    n = int(math.ceil(horizon / dt - 1e-12))
    grid = np.minimum(np.arange(n + 1) * dt, horizon)
    result.grid_step = float(dt)
    search = _Search(orbit, t_tol)
    bounded = result.bound != "none"

    start, size = 0, _CHUNK
    prev_h = None
    while start < n:
        stop = min(n, start + size)
        ts = grid[start:stop + 1]
        hs = orbit.margin(ts)
        search.evaluations += len(ts)
        if start == 0:
            hs[0] = -1.0  # D(rho, rho) = 0 < epsilon
        bracket = _scan_chunk(search, ts, hs, bounded, prev_h)
        if bracket is not None:
            lo, hi = search.bisect(*bracket)
            result.status, result.t_star, result.bracket_width = REACHED, float(hi), float(hi - lo)
            break
        prev_h = hs[-2] if len(hs) > 1 else prev_h
        start, size = stop, size * 2
    result.evaluations = search.evaluations
    return result


def _scan_chunk(search: _Search, ts, hs, bounded: bool, prev_h):
    """First crossing bracket among the intervals of one grid chunk."""
    hit = np.flatnonzero(hs[1:] >= 0)
    last = hit[0] + 1 if hit.size else len(ts)
    a, b, ha, hb = ts[:-1], ts[1:], hs[:-1], hs[1:]
    if bounded:
        flagged = np.flatnonzero(search.orbit.upper_bound(a, b, ha, hb) >= 0)
        for k in flagged:
            if k + 1 >= last:
                break
            br = search.refine(a[k], b[k], ha[k], hb[k])
            if br is not None:
                return br
    else:
        left = np.concatenate([[prev_h if prev_h is not None else -np.inf], hs[:-1]])
        right = np.concatenate([hs[1:], [-np.inf]])
        peaks = np.flatnonzero((hs >= left) & (hs >= right) & (hs < 0))
        for j in peaks:
            if j >= last or j == 0:
                continue
            tm, hm = search.maximize(ts[j - 1], ts[min(j + 1, len(ts) - 1)])
            if hm >= 0:
                return ts[j - 1], tm
    if hit.size:
        k = hit[0]
        return ts[k], ts[k + 1]
    return None


def speed(tau: TauResult, scaled: bool = False) -> float:
    """Average speed 1/tau (or epsilon/tau); zero when not reached."""
    if not tau.reached:
        return 0.0
    return (tau.epsilon if scaled else 1.0) / tau.t_star


def instantaneous_speed_check(rho: DensityMatrix, h: Hamiltonian, delta: float):
    """(F_H(rho), ||rho - rho(delta)||_1 / delta)."""
    lhs = f_measure(rho, h)
    orbit = Orbit(rho, h, Measure("trace"), 1.0)
    rhs = float(orbit.values([delta])[0]) / delta
    return lhs, rhs


def instantaneous_acceleration_check(rho: DensityMatrix, h: Hamiltonian, delta: float):
    """(S_H(rho), one quarter of the central second difference of D_1/2 at 0)."""
    lhs = skew_information(rho, h)
    fwd = renyi_relative_entropy(rho, evolve(rho, h, delta), 0.5)
    back = renyi_relative_entropy(rho, evolve(rho, h, -delta), 0.5)
    rhs = 0.25 * (fwd + back) / delta ** 2
    return lhs, rhs


@dataclass
class OrbitSample:
    times: np.ndarray
    values: np.ndarray
    measure: Measure = field(default=None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "D"])
        for t, v in zip(self.times, self.values):
            w.writerow([format(float(t), ".17g"), format(float(v), ".17g")])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "OrbitSample":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["t", "D"]:
            raise ValidationError("orbit CSV must start with header 't,D'")
        data = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float).reshape(-1, 2)
        return cls(data[:, 0], data[:, 1])


def orbit_scan(rho: DensityMatrix, h: Hamiltonian, measure: Measure, times) -> OrbitSample:
    """Sample t -> D(rho, rho(t)) at the given ascending, non-negative times."""
    t = np.asarray(times, dtype=float).ravel()
    if t.size == 0 or np.any(t < 0) or np.any(np.diff(t) < 0):
        raise ValidationError("times must be non-empty, non-negative and ascending")
    orbit = Orbit(rho, h, measure, 1.0)
    vals = orbit.values(t) if measure.kind != "perp" else np.array(
        [distance(measure, rho, evolve(rho, h, x)) for x in t])
    vals = np.asarray(vals, dtype=float)
    vals[t == 0] = 0.0
    return OrbitSample(t, vals, measure)
