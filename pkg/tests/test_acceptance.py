"""Acceptance criteria, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line
per criterion as it finishes; the lines are also repeated in the terminal
summary.
"""

import math

import numpy as np
import pytest

from qslasym.bounds import l1_bound, ml_bound, mt_bound, renyi_bound
from qslasym.channels import (
    apply_channel,
    constant_channel,
    dilation_to_channel,
    harmonic_residual,
    incoherence_residual,
    random_energy_conserving_unitary,
    unitary_channel,
    verify_ti,
)
from qslasym.distinguishability import INFIDELITY, PERP, RENYI_HALF, TRACE
from qslasym.evolution import (
    UNREACHED,
    instantaneous_acceleration_check,
    instantaneous_speed_check,
    solve_tau,
)
from qslasym.measures import a_min_max, dyson_skew, energy_stats, f_measure, skew_information
from qslasym.sampling import (
    random_density_matrix,
    random_hamiltonian,
    random_incoherent_state,
    random_pure_state,
    random_state,
    rng_from,
)
from qslasym.states import DensityMatrix, Hamiltonian, ket, permutation_unitary, tensor_hamiltonian, tensor_state
from qslasym.suites import measure_convexity, speed_monotonicity, speed_quasi_convexity

from conftest import record_criterion, rho_p

TRACE_EPS = (0.1, 0.5, 1.0, 1.9)
RENYI_EPS = (0.5, 2.0, 10.0)
SOLVER_SLACK = 1e-5


def test_criterion_01_qubit_saturation():
    h, plus = Hamiltonian.diagonal([0, 1]), DensityMatrix.pure([1, 1])
    tau = solve_tau(plus, h, TRACE, 2 - 1e-12)
    errs = (abs(tau.t_star - math.pi), abs(mt_bound(plus, h) - math.pi), abs(ml_bound(plus, h) - math.pi))
    ok = tau.reached and errs[0] <= 1e-5 and errs[1] <= 1e-12 and errs[2] <= 1e-12
    record_criterion(1, ok, f"tau_perp={tau.t_star:.10f} |tau-pi|={errs[0]:.2e}, "
                            f"|mt-pi|={errs[1]:.1e}, |ml-pi|={errs[2]:.1e}")
    assert ok


def test_criterion_02_generalised_bounds_hold():
    rng = rng_from(202)
    violations, worst, reached = [], -math.inf, 0
    for n in range(500):
        d = int(rng.integers(2, 9))
        h = random_hamiltonian(d, rng, "generic" if n % 2 else "integer")
        rho = random_state(d, rng)
        for eps in TRACE_EPS:
            tau = solve_tau(rho, h, TRACE, eps)
            if tau.reached:
                reached += 1
                gap = l1_bound(rho, h, eps) - tau.t_star
                worst = max(worst, gap)
                if gap > SOLVER_SLACK:
                    violations.append(("l1", n, eps, gap))
        for eps in RENYI_EPS:
            tau = solve_tau(rho, h, RENYI_HALF, eps)
            if tau.reached:
                reached += 1
                gap = renyi_bound(rho, h, eps) - tau.t_star
                worst = max(worst, gap)
                if gap > SOLVER_SLACK:
                    violations.append(("renyi", n, eps, gap))
    ok = not violations
    record_criterion(2, ok, f"500 pairs x 7 thresholds, {reached} crossings, {len(violations)} violations, "
                            f"max(bound - tau)={worst:.3e}")
    assert ok, violations[:5]


def test_criterion_03_pure_state_constants():
    rng = rng_from(303)
    worst_l1 = worst_ren = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 9))
        rho, h = random_pure_state(d, rng), random_hamiltonian(d, rng)
        mt = mt_bound(rho, h)
        worst_l1 = max(worst_l1, abs(l1_bound(rho, h, 2.0) / mt - 2 / math.pi))
        worst_ren = max(worst_ren, abs(renyi_bound(rho, h, 80.0) / mt - 2 / math.pi))
    ok = worst_l1 <= 1e-9 and worst_ren <= 1e-6
    record_criterion(3, ok, f"max |l1/mt - 2/pi|={worst_l1:.2e}, max |renyi/mt - 2/pi|={worst_ren:.2e}")
    assert ok


def test_criterion_04_mixed_state_tightness():
    h, rho = Hamiltonian.diagonal([0, 1]), rho_p(0.1)
    tau = solve_tau(rho, h, TRACE, 0.1)
    l1 = l1_bound(rho, h, 0.1)
    mt, ml = mt_bound(rho, h), ml_bound(rho, h)
    tau_perp = solve_tau(rho, h, TRACE, 2 - 1e-12)
    far = [solve_tau(rho, h, TRACE, eps) for eps in (0.21, 0.5, 1.0)]
    ok = (tau.reached and abs(tau.t_star - math.pi / 3) <= 1e-5 and l1 == 1.0
          and abs(mt - math.pi) <= 1e-12 and abs(ml - math.pi) <= 1e-12
          and tau_perp.status == UNREACHED and all(t.status == UNREACHED for t in far))
    record_criterion(4, ok, f"tau={tau.t_star:.9f} (pi/3={math.pi / 3:.9f}), l1={l1!r}, ratio={l1 / tau.t_star:.4f}, "
                            f"mt=ml={mt:.6f} finite while tau_perp and eps>2p are unreached")
    assert ok


def test_criterion_05_speed_monotone_under_ti():
    res = speed_monotonicity(seed=505, trials=200, dims=(2, 3, 4))
    record_criterion(5, res.ok, f"{res.passed}/{res.trials} (state, TI channel) pairs, "
                                f"worst residual {res.worst:.3e}")
    assert res.ok, res.failures


def test_criterion_06_speed_quasi_convex():
    res = speed_quasi_convexity(seed=606, trials=200, dims=(2, 3, 4))
    record_criterion(6, res.ok, f"{res.passed}/{res.trials} triples, worst residual {res.worst:.3e}")
    assert res.ok, res.failures


def test_criterion_07_measure_identities():
    rng = rng_from(707)
    pure_err = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 9))
        rho, h = random_pure_state(d, rng), random_hamiltonian(d, rng)
        de = energy_stats(rho, h).delta_e
        pure_err = max(pure_err, abs(f_measure(rho, h) - 2 * de), abs(skew_information(rho, h) - de ** 2))
    ineq = -math.inf
    for _ in range(200):
        d = int(rng.integers(2, 9))
        rho, h = random_density_matrix(d, rng), random_hamiltonian(d, rng)
        de = energy_stats(rho, h).delta_e
        ineq = max(ineq, f_measure(rho, h) - 2 * de, skew_information(rho, h) - de ** 2)
    add_err = 0.0
    for _ in range(50):
        da, db = (int(x) for x in rng.integers(2, 5, size=2))
        ha, hb = random_hamiltonian(da, rng), random_hamiltonian(db, rng)
        a, b = random_state(da, rng), random_state(db, rng)
        lhs = skew_information(tensor_state(a, b), tensor_hamiltonian(ha, hb))
        add_err = max(add_err, abs(lhs - skew_information(a, ha) - skew_information(b, hb)))
    conv = measure_convexity(seed=rng.integers(2 ** 31), trials=200)
    ok = pure_err <= 1e-9 and ineq <= 1e-9 and add_err <= 1e-9 and conv.ok and conv.worst <= 1e-9
    record_criterion(7, ok, f"pure identities {pure_err:.1e}, inequalities max excess {ineq:.1e}, "
                            f"additivity {add_err:.1e}, convexity {conv.passed}/{conv.trials} (worst {conv.worst:.1e})")
    assert ok


def test_criterion_08_finite_differences():
    rng = rng_from(808)
    speed_err = accel_err = 0.0
    for _ in range(50):
        rho, h = random_state(4, rng), random_hamiltonian(4, rng)
        f, fd = instantaneous_speed_check(rho, h, 1e-4)
        speed_err = max(speed_err, abs(f - fd))
    for _ in range(50):
        rho, h = random_density_matrix(4, rng), random_hamiltonian(4, rng)
        s, fd = instantaneous_acceleration_check(rho, h, 1e-3)
        accel_err = max(accel_err, abs(s - fd))
    ok = speed_err <= 1e-3 and accel_err <= 1e-3
    record_criterion(8, ok, f"max |F_H - FD speed|={speed_err:.2e}, max |S_H - FD acceleration|={accel_err:.2e}")
    assert ok


def test_criterion_09_channel_certification():
    rng = rng_from(909)
    cov = harm = inc = 0.0
    for n in range(50):
        d = int(rng.integers(2, 5))
        h = random_hamiltonian(d, rng, ("integer", "generic", "diagonal")[n % 3])
        h_env = Hamiltonian.diagonal(h.eigenvalues)
        dil = random_energy_conserving_unitary(h, h_env, seed=int(rng.integers(2 ** 31)),
                                               env_initial_index=int(rng.integers(d)))
        ch = dilation_to_channel(dil, h)
        cov = max(cov, verify_ti(ch, h))
        harm = max(harm, harmonic_residual(ch, h))
        inc = max(inc, incoherence_residual(ch, h))
    h3 = Hamiltonian.diagonal([0.0, 1.3, 2.1])
    perm = verify_ti(unitary_channel(permutation_unitary([0, 2, 1])), h3)
    ok = cov <= 1e-8 and harm <= 1e-8 and inc <= 1e-9 and perm > 0.1
    record_criterion(9, ok, f"50 dilations: covariance {cov:.1e}, harmonic {harm:.1e}, incoherence {inc:.1e}; "
                            f"permutation covariance residual {perm:.3f}")
    assert ok


def test_criterion_10_counterexamples():
    small = skew_information(DensityMatrix.pure([1, 1]), Hamiltonian.diagonal([0, 1]))
    errs = [abs(small - 0.25)]
    for n in range(2, 9):
        v = np.zeros(n + 1)
        v[[0, n]] = 1
        big = skew_information(DensityMatrix.pure(v), Hamiltonian.diagonal(np.arange(n + 1)))
        errs.append(abs(big - n ** 2 / 4))
    h = Hamiltonian.diagonal([0, 1, 2])
    ground = DensityMatrix.pure(ket(0, 3))
    out = apply_channel(constant_channel(DensityMatrix(np.diag([0.5, 0, 0.5])), h), ground)
    a0, a1 = a_min_max(ground, h)[0], a_min_max(out, h)[0]
    ok = max(errs) <= 1e-12 and abs(a0) <= 1e-12 and abs(a1 - 1) <= 1e-12
    record_criterion(10, ok, f"S_H 1/4 vs N^2/4 (N=2..8) max err {max(errs):.1e}; A_min {a0:.3g} -> {a1:.15g}")
    assert ok


def test_criterion_11_incoherent_stationarity():
    rng = rng_from(1111)
    worst_measure, all_unreached, all_inf = 0.0, True, True
    for n in range(50):
        d = int(rng.integers(2, 9))
        h = random_hamiltonian(d, rng, "diagonal" if n % 2 else "generic")
        rho = random_incoherent_state(h, rng)
        worst_measure = max(worst_measure, f_measure(rho, h), skew_information(rho, h), dyson_skew(rho, h, 0.5))
        for measure, eps in ((TRACE, 0.1), (RENYI_HALF, 0.5), (INFIDELITY, 0.1), (PERP, 1.0)):
            all_unreached &= solve_tau(rho, h, measure, eps).status == UNREACHED
        all_inf &= l1_bound(rho, h, 1.0) == math.inf and renyi_bound(rho, h, 1.0) == math.inf
    ok = worst_measure <= 1e-10 and all_unreached and all_inf
    record_criterion(11, ok, f"50 incoherent states: max measure {worst_measure:.1e}, "
                             f"all unreached={all_unreached}, generalised bounds all inf={all_inf}")
    assert ok
