"""Randomised end-to-end checks of the monotonicity and convexity properties.

Each check returns a :class:`PropertyResult` with the number of trials, the
number passing, and the worst residual (how far the inequality was from
failing, positive meaning violated). The CLI ``monotone-suite`` command and
the acceptance tests both run these.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import apply_channel, unitary_channel
from .distinguishability import RENYI_HALF, TRACE
from .evolution import default_horizon, solve_tau
from .measures import f_measure, skew_information
from .sampling import (
    random_density_matrix,
    random_hamiltonian,
    random_state,
    random_ti_channel_mix,
    rng_from,
)
from .states import permutation_unitary

SPEED_SETTINGS = ((TRACE, 0.5), (RENYI_HALF, 0.5))
MEASURE_SLACK = 1e-9


@dataclass
class PropertyResult:
    name: str
    trials: int = 0
    passed: int = 0
    worst: float = -math.inf
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def record(self, residual: float, slack: float, info=None):
        self.trials += 1
        self.worst = max(self.worst, residual)
        if residual <= slack:
            self.passed += 1
        elif len(self.failures) < 5:
            self.failures.append(info)

    def row(self) -> dict:
        return {"property": self.name, "trials": self.trials, "passed": self.passed,
                "worst_residual": self.worst, "status": "PASS" if self.ok else "FAIL"}


def _hamiltonian(dim, rng):
    return random_hamiltonian(dim, rng, "integer" if rng.random() < 0.5 else "generic")


def _tau_gap(tau_in, tau_out):
    """How much sooner the output state crossed than the input (positive is bad)."""
    if not tau_out.reached:
        return -math.inf
    if not tau_in.reached:
        return math.inf
    return tau_in.t_star - tau_out.t_star


def speed_monotonicity(seed=0, trials=200, dims=(2, 3, 4), settings=SPEED_SETTINGS,
                       channel_sampler=random_ti_channel_mix, name="speed non-increasing under TI"):
    """1/tau never increases under a TI channel (matched horizon)."""
    rng = rng_from(seed)
    res = PropertyResult(name)
    for _ in range(trials):
        d = int(rng.choice(dims))
        h = _hamiltonian(d, rng)
        rho = random_state(d, rng)
        ch = channel_sampler(h, rng)
        out = apply_channel(ch, rho)
        horizon = default_horizon(rho, h)
        residual = -math.inf
        for measure, eps in settings:
            if horizon == 0:
                continue
            t_in = solve_tau(rho, h, measure, eps, horizon=horizon)
            t_out = solve_tau(out, h, measure, eps, horizon=horizon)
            tol = t_in.bracket_width + t_out.bracket_width + 1e-9
            residual = max(residual, _tau_gap(t_in, t_out) - tol)
        res.record(residual, 0.0, {"dim": d, "channel": ch.name, "residual": residual})
    return res


def speed_quasi_convexity(seed=1, trials=200, dims=(2, 3, 4), settings=SPEED_SETTINGS):
    """1/tau(p rho + (1-p) sigma) <= max(1/tau(rho), 1/tau(sigma))."""
    rng = rng_from(seed)
    res = PropertyResult("speed quasi-convex")
    for _ in range(trials):
        d = int(rng.choice(dims))
        h = _hamiltonian(d, rng)
        rho, sigma = random_state(d, rng), random_state(d, rng)
        p = float(rng.uniform(0.05, 0.95))
        mix = rho.mix(sigma, p)
        horizon = max(default_horizon(x, h) for x in (rho, sigma, mix))
        worst = -math.inf
        for measure, eps in settings:
            if horizon == 0:
                continue
            taus = [solve_tau(x, h, measure, eps, horizon=horizon) for x in (rho, sigma, mix)]
            t_min = min(taus[0].tau, taus[1].tau)
            if not taus[2].reached:
                continue
            tol = max(t.bracket_width for t in taus) * 2 + 1e-9
            gap = (t_min - taus[2].t_star) - tol if math.isfinite(t_min) else math.inf
            worst = max(worst, gap)
        res.record(worst, 0.0, {"dim": d, "p": p})
    return res


def measure_monotonicity(seed=2, trials=200, dims=(2, 3, 4), channel_sampler=random_ti_channel_mix,
                         name="F_H, S_H non-increasing under TI"):
    rng = rng_from(seed)
    res = PropertyResult(name)
    for _ in range(trials):
        d = int(rng.choice(dims))
        h = _hamiltonian(d, rng)
        rho = random_state(d, rng)
        ch = channel_sampler(h, rng)
        out = apply_channel(ch, rho)
        gap = max(f_measure(out, h) - f_measure(rho, h), skew_information(out, h) - skew_information(rho, h))
        res.record(gap, MEASURE_SLACK, {"dim": d, "channel": ch.name})
    return res


def measure_convexity(seed=3, trials=200, dims=(2, 3, 4, 5)):
    rng = rng_from(seed)
    res = PropertyResult("F_H, S_H convex")
    for _ in range(trials):
        d = int(rng.choice(dims))
        h = _hamiltonian(d, rng)
        rho, sigma = random_state(d, rng), random_state(d, rng)
        p = float(rng.uniform())
        mix = rho.mix(sigma, p)
        gap = -math.inf
        for f in (f_measure, skew_information):
            gap = max(gap, f(mix, h) - (p * f(rho, h) + (1 - p) * f(sigma, h)))
        res.record(gap, MEASURE_SLACK, {"dim": d, "p": p})
    return res


def permutation_sampler(h, rng):
    """Non-TI level permutations, used to show the suite detects violations."""
    sigma = rng.permutation(h.dim)
    while h.dim > 1 and np.all(sigma == np.arange(h.dim)):
        sigma = rng.permutation(h.dim)
    u = h.from_eigenbasis(permutation_unitary(sigma))
    return unitary_channel(u, name="permutation")


def run_suite(seed=0, trials=50, dims=(2, 3, 4), inject_non_ti=False):
    """All property checks; ``inject_non_ti`` swaps in level permutations."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    sampler = permutation_sampler if inject_non_ti else random_ti_channel_mix
    suffix = " [non-TI injected]" if inject_non_ti else ""
    ss = np.random.SeedSequence(seed).spawn(4)
    return [
        measure_monotonicity(ss[0], trials, dims, sampler, "F_H, S_H non-increasing under TI" + suffix),
        speed_monotonicity(ss[1], trials, dims, channel_sampler=sampler,
                           name="speed non-increasing under TI" + suffix),
        speed_quasi_convexity(ss[2], trials, dims),
        measure_convexity(ss[3], trials, dims),
    ]


def random_mixed_pairs(n, dims, seed):
    """``n`` random (full-rank state, Hamiltonian) pairs."""
    rng = rng_from(seed)
    for _ in range(n):
        d = int(rng.choice(dims))
        yield random_density_matrix(d, rng), _hamiltonian(d, rng)
