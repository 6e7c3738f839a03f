"""End-to-end acceptance suite.

Each test prints exactly one line — ``ACCEPTANCE NN <label>: PASS/FAIL — detail``
— through the capture bypass so the verdicts are always visible, then asserts.
Tolerances are fixed here and are not to be loosened: a failing line means the
package genuinely does not reproduce the demanded behavior, and the reasons
are documented in the project notes.
"""

import math

import numpy as np
import pytest

from ccfmlab.integrate import SimConfig, amplitude_envelope, simulate
from ccfmlab.model import (
    EquilibriumCoefficients,
    LeaderProfile,
    PlatoonConfig,
    PlatoonState,
    VehicleParams,
    beta_star,
)
from ccfmlab.rates import rate_of_convergence
from ccfmlab.spectral import (
    Regime,
    classify_pair,
    critical_delay,
    dominant_root,
    no_delay_spectrum,
    small_delay_condition,
    transversality,
)
from ccfmlab.hopf import hopf_report

from conftest import four_vehicle_platoon, numeric_crossing_speed, single_follower

E_INV = 1.0 / math.e
HALF_PI = math.pi / 2.0


def _verdict(capsys, num, label, ok, detail):
    with capsys.disabled():
        print(f"ACCEPTANCE {num:02d} {label}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"criterion {num}: {detail}"


def _window_amp(traj, col, t_lo, t_hi):
    mask = (traj.t >= t_lo) & (traj.t < t_hi)
    seg = traj.states[mask, col]
    return 0.5 * (seg.max() - seg.min())


def test_criterion_01_critical_delay(capsys):
    got = critical_delay(3.5)
    err = abs(got - math.pi / 7.0)
    _verdict(
        capsys, 1, "critical delay",
        err <= 1e-9,
        f"critical_delay(3.5) = {got:.12f}, |err vs pi/7| = {err:.3e} (tol 1e-9)",
    )


def test_criterion_02_classification_consistency(capsys):
    rng = np.random.default_rng(12345)
    mismatches = 0
    total = 500
    for _ in range(total):
        while True:
            c = rng.uniform(1e-3, 2.0)
            if abs(c - E_INV) > 1e-9 and abs(c - HALF_PI) > 1e-9:
                break
        tau = rng.uniform(0.05, 2.0)
        regime = classify_pair(c / tau, tau).regime
        lam = dominant_root(c / tau, tau, verify=False).lam
        if regime is Regime.NON_OSCILLATORY_STABLE:
            ok = lam.imag == 0.0 and lam.real < 0.0
        elif regime is Regime.OSCILLATORY_STABLE:
            ok = lam.imag > 0.0 and lam.real < 0.0
        else:
            ok = lam.real >= -1e-12
        mismatches += 0 if ok else 1
    _verdict(
        capsys, 2, "regime vs dominant root",
        mismatches == 0,
        f"{total - mismatches}/{total} random products agree "
        f"(boundary bands of 1e-9 excluded)",
    )


def test_criterion_03_transversality(capsys):
    closed = transversality(3.5, math.pi / 7.0, 0)
    pinned = 1.58563
    err_pinned = abs(closed - pinned)
    ok_pinned = err_pinned <= 1e-5

    rng = np.random.default_rng(4242)
    worst = 0.0
    for _ in range(100):
        beta = rng.uniform(0.5, 6.0)
        tau = rng.uniform(0.1, 1.5)
        n = int(rng.choice([0, 2]))
        cf = transversality(beta, tau, n)
        nm = numeric_crossing_speed(beta, tau, n)
        worst = max(worst, abs(cf - nm) / abs(cf))
    ok_numeric = worst <= 1e-6

    _verdict(
        capsys, 3, "crossing speed",
        ok_pinned and ok_numeric,
        f"closed form {closed:.16f} vs pinned {pinned} (diff {err_pinned:.2e}, "
        f"tol 1e-5: {'ok' if ok_pinned else 'FAIL'}); continuation agreement "
        f"max rel {worst:.2e} over 100 triples "
        f"({'ok' if ok_numeric else 'FAIL'})",
    )


def test_criterion_04_branch_point_double_root(capsys):
    ok = True
    details = []
    for tau in (0.25, 0.5, 1.0):
        root = dominant_root(E_INV / tau, tau)
        scaled = root.lam * tau
        # F'(lam) = 1 - tau*a*exp(-lam*tau) vanishes at a genuine double root
        fprime = 1.0 - tau * (E_INV / tau) * np.exp(-root.lam * tau)
        here = (
            scaled.imag == 0.0
            and abs(scaled.real + 1.0) <= 1e-9
            and abs(fprime) <= 1e-9
            and root.verified
        )
        ok = ok and here
        details.append(f"tau={tau}: lam*tau={scaled.real:.12f}")
    _verdict(
        capsys, 4, "double root at 1/e",
        ok,
        "; ".join(details) + " (tol 1e-9, multiplicity witnessed by F' = 0)",
    )


def test_criterion_05_rate_peak_location(capsys):
    beta = 3.5
    tau_star_pinned = 0.105091
    num = 400
    upper = HALF_PI / beta
    step = upper / (num + 1)
    grid = step * np.arange(1, num + 1)
    rates = np.array([rate_of_convergence(beta, t).dominant for t in grid])
    k = int(np.argmax(rates))
    ok_peak = abs(grid[k] - tau_star_pinned) <= step
    lo = rate_of_convergence(beta, tau_star_pinned / 3.0).dominant
    hi = rate_of_convergence(beta, 3.0 * tau_star_pinned).dominant
    ok_asym = lo > hi
    _verdict(
        capsys, 5, "optimal delay",
        ok_peak and ok_asym,
        f"argmax at tau = {grid[k]:.6f} (pinned {tau_star_pinned}, grid step "
        f"{step:.5f}); rate(tau*/3) = {lo:.4f} > rate(3 tau*) = {hi:.4f}",
    )


def test_criterion_06_rate_monotone_in_headway_exponent(capsys):
    tau = 0.15
    rates = {}
    for l in (0.8, 1.0, 1.2):
        bstar = beta_star(0.7, 10.0, 2.0, 20.0, l)
        rates[l] = rate_of_convergence(bstar, tau).dominant
    ok = rates[0.8] > rates[1.0] > rates[1.2]
    _verdict(
        capsys, 6, "rate falls with l",
        ok,
        f"rates at tau=0.15: l=0.8 -> {rates[0.8]:.4f}, l=1.0 -> {rates[1.0]:.4f}, "
        f"l=1.2 -> {rates[1.2]:.4f} (demanded strictly decreasing; the gain's "
        f"l-dependence moves the pair between branches, so the middle value peaks)",
    )


def test_criterion_07_sustained_marginal_oscillation(capsys):
    pc = four_vehicle_platoon()
    traj = simulate(
        pc, SimConfig(step=0.01, horizon=300.0), PlatoonState.uniform_perturbation(4)
    )
    # pair 3 (columns: v_3 is 2, y_3 is 6) over the last two 25 s windows
    a1_v = _window_amp(traj, 2, 250.0, 275.0)
    a2_v = _window_amp(traj, 2, 275.0, 300.01)
    var_v = abs(a1_v - a2_v) / max(a1_v, a2_v)
    sustained = a2_v > 1e-3
    ok_pair3 = sustained and var_v < 0.05

    others_ok = True
    worst_other = 0.0
    for col in (0, 1, 3, 4, 5, 7):  # v and y of pairs 1, 2, 4
        amp = _window_amp(traj, col, 225.0, 300.01)
        worst_other = max(worst_other, amp)
        others_ok = others_ok and amp < 1e-3
    _verdict(
        capsys, 7, "marginal pair keeps oscillating",
        ok_pair3 and others_ok,
        f"v_3 window amplitudes {a1_v:.3e} -> {a2_v:.3e} (variation "
        f"{100 * var_v:.1f}%, need < 5% and a sustained cycle): the oscillation "
        f"decays instead of settling on a cycle; damped pairs max amp "
        f"{worst_other:.2e} (< 1e-3 {'ok' if others_ok else 'FAIL'})",
    )


def test_criterion_08_supercritical_onset_scaling(capsys):
    rep = hopf_report(single_follower())
    ok_type = rep.kind == "supercritical" and rep.orbit == "stable"

    kappas = np.array([1.0025, 1.005, 1.01, 1.02])
    amps = []
    for kappa in kappas:
        pc = single_follower(kappa=float(kappa))
        traj = simulate(
            pc,
            SimConfig(step=0.01, horizon=300.0, method="rk4"),
            PlatoonState.uniform_perturbation(1),
        )
        amps.append(amplitude_envelope(traj).max_v)
    amps = np.array(amps)
    slope, _ = np.polyfit(np.log(kappas - 1.0), np.log(amps), 1)
    ok_fit = 0.4 <= slope <= 0.6
    _verdict(
        capsys, 8, "onset amplitude scaling",
        ok_type and ok_fit,
        f"normal form: {rep.kind}/{rep.orbit} (mu2 = {rep.mu2:.4f}, beta2 = "
        f"{rep.beta2:.4f}) {'ok' if ok_type else 'FAIL'}; measured tail "
        f"amplitudes {np.array2string(amps, precision=5)} give exponent "
        f"p = {slope:.3f} (need 0.4..0.6): the transient dies out instead of "
        f"locking onto the predicted cycle",
    )


def test_criterion_09_amplitude_growth_and_l_ordering(capsys):
    kappas = np.linspace(1.0, 1.05, 51)
    curves = {}
    for l in (0.95, 1.0, 1.05):
        bstar = beta_star(0.7, 10.0, 2.0, 20.0, l)
        tau_cr = HALF_PI / bstar
        amps = []
        for kappa in kappas:
            pc = PlatoonConfig(
                vehicles=(VehicleParams(alpha=0.7, tau=tau_cr, b=20.0),),
                m=2.0,
                l=l,
                leader=LeaderProfile(v_eq=10.0, ramp=10.0),
                kappa=float(kappa),
            )
            traj = simulate(
                pc, SimConfig(step=0.01, horizon=300.0),
                PlatoonState.uniform_perturbation(1),
            )
            amps.append(amplitude_envelope(traj).max_v)
        curves[l] = np.array(amps)

    finals = {l: curves[l][-1] for l in curves}
    ok_positive = all(a > 0.0 for a in finals.values())
    dips = {
        l: int(np.sum(np.diff(curves[l]) < 0.0)) for l in curves
    }
    ok_growth = all(d <= 1 for d in dips.values())
    f = [finals[0.95], finals[1.0], finals[1.05]]
    ok_order = not (f[0] < f[1] < f[2] or f[0] > f[1] > f[2])
    _verdict(
        capsys, 9, "past-threshold amplitude sweep",
        ok_positive and ok_growth and ok_order,
        f"amplitudes at kappa=1.05: {f[0]:.3e}, {f[1]:.3e}, {f[2]:.3e} "
        f"(positive {'ok' if ok_positive else 'FAIL'}); dips per curve "
        f"{dips} (need <= 1: every curve decays with kappa instead of growing) "
        f"{'ok' if ok_growth else 'FAIL'}; l-ordering non-monotone "
        f"{'ok' if ok_order else 'FAIL'}",
    )


def test_criterion_10_no_delay_and_small_delay(capsys):
    rng = np.random.default_rng(777)
    all_negative = True
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        vehicles = tuple(
            VehicleParams(
                alpha=float(rng.uniform(0.05, 3.0)),
                tau=float(rng.uniform(0.0, 1.0)),
                b=float(rng.uniform(0.5, 50.0)),
            )
            for _ in range(n)
        )
        pc = PlatoonConfig(
            vehicles=vehicles,
            m=float(rng.uniform(-2.0, 2.0)),
            l=float(rng.uniform(0.0, 3.0)),
            leader=LeaderProfile(v_eq=float(rng.uniform(0.5, 30.0))),
            kappa=float(rng.uniform(0.1, 4.0)),
        )
        eq = EquilibriumCoefficients.from_config(pc)
        if not np.all(no_delay_spectrum(eq, kappa=pc.kappa) < 0.0):
            all_negative = False

    # first-order-in-delay reduction, assembled and eigen-solved directly
    consistent = True
    checked = 0
    while checked < 200:
        n = int(rng.integers(1, 5))
        beta = rng.uniform(0.5, 5.0, size=n)
        tau = rng.uniform(0.05, 0.6, size=n)
        prods = beta * tau
        if np.any(np.abs(prods - 1.0) < 1e-3):
            continue  # conditioning: the reduced system's mass matrix is singular at 1
        m_mat = np.eye(n)
        a_mat = np.zeros((n, n))
        for i in range(n):
            m_mat[i, i] = 1.0 - prods[i]
            a_mat[i, i] = -beta[i]
            if i > 0:
                m_mat[i, i - 1] = prods[i - 1]
                a_mat[i, i - 1] = beta[i - 1]
        eigvals = np.linalg.eigvals(np.linalg.solve(m_mat, a_mat))
        ode_stable = bool(np.all(eigvals.real < 0.0))
        vehicles = tuple(
            VehicleParams(alpha=float(b), tau=float(t), b=1.0)
            for b, t in zip(beta, tau)
        )
        pc = PlatoonConfig(
            vehicles=vehicles, m=0.0, l=0.0, leader=LeaderProfile(v_eq=10.0)
        )
        check = small_delay_condition(EquilibriumCoefficients.from_config(pc))
        if check.all_satisfied != ode_stable:
            consistent = False
        checked += 1

    _verdict(
        capsys, 10, "delay-free and small-delay reductions",
        all_negative and consistent,
        f"no-delay spectrum strictly negative for 1000 random platoons "
        f"({'ok' if all_negative else 'FAIL'}); small-delay criterion matched "
        f"the reduced ODE eigenvalues on 200 random platoons "
        f"({'ok' if consistent else 'FAIL'})",
    )
