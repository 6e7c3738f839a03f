"""Characteristic-root machinery: regime classification, dominant roots,
threshold curves, and the crossing-speed formula.

Where an independent oracle exists it is used: the scalar transcendental
lambda + a*exp(-lambda*tau) = 0 has its rightmost root at W_0(-a*tau)/tau
(principal Lambert W branch), and scipy.special.lambertw supplies that
value without sharing any code with the package solver.
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.special import lambertw

from ccfmlab.errors import InvalidConfigError
from ccfmlab.model import EquilibriumCoefficients
from ccfmlab.spectral import (
    Regime,
    classify_pair,
    classify_platoon,
    critical_delay,
    critical_gain,
    dominant_root,
    hopf_point,
    no_delay_spectrum,
    small_delay_condition,
    stability_region_margin,
    transversality,
    winding_zero_count,
)

from conftest import four_vehicle_platoon, numeric_crossing_speed, single_follower

E_INV = 1.0 / math.e
HALF_PI = math.pi / 2.0


# ---------------------------------------------------------------------------
# regime classification
# ---------------------------------------------------------------------------


def test_classify_pair_examples():
    v = classify_pair(1.0, 0.30)
    assert v.regime is Regime.NON_OSCILLATORY_STABLE
    assert v.product == pytest.approx(0.30, rel=1e-15)

    v = classify_pair(2.0, 0.5)  # product 1.0, between 1/e and pi/2
    assert v.regime is Regime.OSCILLATORY_STABLE
    assert v.margin_nonoscillatory == pytest.approx(E_INV - 1.0, rel=1e-14)
    assert v.margin_instability == pytest.approx(HALF_PI - 1.0, rel=1e-14)

    v = classify_pair(3.5, math.pi / 7.0)  # product exactly pi/2
    assert v.regime is Regime.UNSTABLE


def test_classify_pair_threshold_sides():
    tau = 0.4
    assert classify_pair(E_INV / tau, tau).regime is Regime.NON_OSCILLATORY_STABLE
    assert classify_pair((E_INV + 1e-9) / tau, tau).regime is Regime.OSCILLATORY_STABLE
    assert classify_pair((HALF_PI - 1e-9) / tau, tau).regime is Regime.OSCILLATORY_STABLE
    assert classify_pair(HALF_PI / tau, tau).regime is Regime.UNSTABLE


def test_classify_pair_gain_scales_product():
    base = classify_pair(1.0, 0.30)
    scaled = classify_pair(1.0, 0.30, kappa=4.0)
    assert scaled.product == pytest.approx(4.0 * base.product, rel=1e-15)
    assert scaled.regime is Regime.OSCILLATORY_STABLE


def test_classify_pair_to_dict_schema():
    d = classify_pair(2.0, 0.5, pair=3).to_dict()
    assert set(d) == {"pair", "beta_star", "tau", "product", "regime", "margins"}
    assert d["pair"] == 3
    assert d["regime"] == "OscillatoryStable"
    assert set(d["margins"]) == {"nonoscillatory", "instability"}


def test_classify_platoon_mixed_regimes(platoon_config):
    eq = EquilibriumCoefficients.from_config(platoon_config)
    verdicts = classify_platoon(eq)
    regimes = [v.regime for v in verdicts]
    assert regimes == [
        Regime.OSCILLATORY_STABLE,
        Regime.OSCILLATORY_STABLE,
        Regime.UNSTABLE,
        Regime.OSCILLATORY_STABLE,
    ]
    assert [v.pair for v in verdicts] == [1, 2, 3, 4]


# ---------------------------------------------------------------------------
# dominant root vs. Lambert W oracle
# ---------------------------------------------------------------------------


def test_dominant_root_matches_lambert_w_samples():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 120:
        c = rng.uniform(0.01, 2.8)
        if abs(c - E_INV) < 1e-8:
            continue
        tau = rng.uniform(0.05, 2.0)
        root = dominant_root(c / tau, tau)
        u_ref = complex(lambertw(-c, 0))
        lam_ref = u_ref / tau
        if lam_ref.imag < 0:
            lam_ref = lam_ref.conjugate()
        assert abs(root.lam - lam_ref) <= 1e-10 * max(1.0, abs(lam_ref))
        assert root.verified and root.right_count == 0
        assert root.residual <= 1e-12
        checked += 1


def test_dominant_root_at_branch_point_is_double():
    for tau in (0.2, 0.5, 1.3):
        root = dominant_root(E_INV / tau, tau)
        assert root.lam.imag == 0.0
        assert root.lam.real * tau == pytest.approx(-1.0, abs=1e-12)
        assert root.verified


def test_dominant_root_at_instability_threshold():
    root = dominant_root(3.5, math.pi / 7.0)
    assert abs(root.lam.real) <= 1e-10
    assert root.lam.imag == pytest.approx(3.5, rel=1e-10)  # omega = kappa*beta*


def test_dominant_root_deep_real_zone():
    # product 0.05: two well-separated real roots; the shallow one dominates
    root = dominant_root(0.05 / 0.7, 0.7)
    assert root.lam * 0.7 == pytest.approx(-0.05270598355154635, rel=1e-10)
    assert root.verified


def test_dominant_root_zero_delay_exact():
    root = dominant_root(3.5, 0.0)
    assert root.lam == -3.5 + 0.0j
    root = dominant_root(3.5, 0.0, kappa=1.2)
    assert root.lam == pytest.approx(-4.2, rel=1e-15)


def test_dominant_root_deterministic():
    a = dominant_root(1.9, 0.61)
    b = dominant_root(1.9, 0.61)
    assert a.lam == b.lam and a.residual == b.residual


@given(
    c=st.floats(0.02, 2.5),
    tau=st.floats(0.05, 2.0),
)
@settings(max_examples=150, deadline=None)
def test_regime_agrees_with_dominant_root(c, tau):
    assume(abs(c - E_INV) > 1e-9 and abs(c - HALF_PI) > 1e-9)
    verdict = classify_pair(c / tau, tau)
    lam = dominant_root(c / tau, tau, verify=False).lam
    if verdict.regime is Regime.NON_OSCILLATORY_STABLE:
        assert lam.imag == 0.0 and lam.real < 0.0
    elif verdict.regime is Regime.OSCILLATORY_STABLE:
        assert lam.imag > 0.0 and lam.real < 0.0
    else:
        assert lam.real >= -1e-12


# ---------------------------------------------------------------------------
# winding-number zero counter
# ---------------------------------------------------------------------------


def test_winding_count_isolates_known_roots():
    beta, tau = 1.0, 0.3  # product 0.3 < 1/e: two real roots
    lam1 = float(lambertw(-0.3, 0).real) / tau
    lam2 = float(lambertw(-0.3, -1).real) / tau
    assert lam1 > lam2  # -1.63 vs -5.94
    a = beta
    assert winding_zero_count(a, tau, lam1 - 0.5, lam1 + 0.5, -1.0, 1.0) == 1
    assert winding_zero_count(a, tau, lam2 - 0.5, lam2 + 0.5, -1.0, 1.0) == 1
    assert winding_zero_count(a, tau, lam1 + 0.5, lam1 + 2.0, -1.0, 1.0) == 0
    assert winding_zero_count(a, tau, lam2 - 0.5, lam1 + 0.5, -1.0, 1.0) == 2


def test_winding_count_complex_pair():
    beta, tau = 2.0, 0.5  # product 1.0 > 1/e: conjugate dominant pair
    lam = dominant_root(beta, tau).lam
    box = winding_zero_count(
        beta, tau, lam.real - 0.4, lam.real + 0.4, -abs(lam.imag) - 0.6, abs(lam.imag) + 0.6
    )
    assert box == 2


# ---------------------------------------------------------------------------
# instability onset curves
# ---------------------------------------------------------------------------


def test_hopf_point_reference_values():
    hp = hopf_point(3.5, math.pi / 7.0)
    assert hp.omega0 == pytest.approx(3.5, rel=1e-14)
    assert hp.kappa_cr == pytest.approx(1.0, rel=1e-14)
    assert hp.n == 0
    assert hp.residual <= 1e-12

    hp2 = hopf_point(3.5, math.pi / 7.0, n=2)
    assert hp2.omega0 == pytest.approx(17.5, rel=1e-14)
    assert hp2.kappa_cr == pytest.approx(5.0, rel=1e-14)


@pytest.mark.parametrize("n", [-2, 1, 3])
def test_hopf_point_rejects_odd_or_negative_branches(n):
    with pytest.raises(InvalidConfigError):
        hopf_point(3.5, 0.4, n=n)


@given(beta=st.floats(0.2, 8.0), tau=st.floats(0.05, 2.0), n=st.sampled_from([0, 2, 4]))
@settings(max_examples=120, deadline=None)
def test_hopf_point_residual_invariant(beta, tau, n):
    hp = hopf_point(beta, tau, n=n)
    lam = 1j * hp.omega0
    res = abs(lam + hp.kappa_cr * beta * np.exp(-lam * tau))
    assert res <= 1e-10 * max(1.0, hp.omega0)


def test_critical_delay_reference_values():
    assert critical_delay(3.5) == pytest.approx(math.pi / 7.0, abs=1e-12)
    assert critical_delay(1.9224809507857061) == pytest.approx(
        0.8170673036593272, rel=1e-12
    )
    # doubling the exogenous gain halves the critical delay
    assert critical_delay(3.5, kappa=2.0) == pytest.approx(math.pi / 14.0, abs=1e-12)


def test_critical_gain_reference_value():
    assert critical_gain(3.5, math.pi / 7.0) == pytest.approx(1.0, rel=1e-14)
    assert critical_gain(3.5, math.pi / 14.0) == pytest.approx(2.0, rel=1e-14)


@given(
    beta1=st.floats(0.2, 6.0),
    beta2=st.floats(0.2, 6.0),
    tau1=st.floats(0.05, 1.5),
    tau2=st.floats(0.05, 1.5),
)
@settings(max_examples=150, deadline=None)
def test_critical_gain_strictly_decreasing(beta1, beta2, tau1, tau2):
    assume(abs(beta1 - beta2) > 1e-9 and abs(tau1 - tau2) > 1e-9)
    b_lo, b_hi = sorted((beta1, beta2))
    t_lo, t_hi = sorted((tau1, tau2))
    assert critical_gain(b_hi, tau1) < critical_gain(b_lo, tau1)
    assert critical_gain(beta1, t_hi) < critical_gain(beta1, t_lo)


# ---------------------------------------------------------------------------
# crossing speed
# ---------------------------------------------------------------------------


def test_transversality_reference_value():
    assert transversality(3.5, math.pi / 7.0, 0) == pytest.approx(
        1.5855642265760157, rel=1e-12
    )


def test_transversality_matches_root_continuation():
    rng = np.random.default_rng(99)
    for _ in range(25):
        beta = rng.uniform(0.5, 6.0)
        tau = rng.uniform(0.1, 1.5)
        n = int(rng.choice([0, 2]))
        closed = transversality(beta, tau, n)
        numeric = numeric_crossing_speed(beta, tau, n)
        assert abs(closed - numeric) <= 1e-6 * abs(closed)


@given(beta=st.floats(0.1, 8.0), tau=st.floats(0.05, 2.0), n=st.sampled_from([0, 2, 4]))
@settings(max_examples=150, deadline=None)
def test_transversality_always_positive(beta, tau, n):
    assert transversality(beta, tau, n) > 0.0


# ---------------------------------------------------------------------------
# no-delay and small-delay reductions
# ---------------------------------------------------------------------------


def test_no_delay_spectrum_values(platoon_config):
    eq = EquilibriumCoefficients.from_config(platoon_config)
    spec_vals = no_delay_spectrum(eq, kappa=1.3)
    assert np.allclose(spec_vals, -1.3 * np.array([2.5, 3.0, 3.5, 4.0]), rtol=1e-14)
    assert np.all(spec_vals < 0.0)


def test_small_delay_condition_margins(platoon_config):
    eq = EquilibriumCoefficients.from_config(platoon_config)
    check = small_delay_condition(eq)
    assert np.allclose(check.products, [1.25, 1.2, 1.5708, 1.2], rtol=1e-12)
    assert not check.all_satisfied
    assert np.allclose(check.margins, 1.0 - check.products, rtol=1e-15)

    shrunk = four_vehicle_platoon(taus=(0.2, 0.2, 0.2, 0.2))
    eq2 = EquilibriumCoefficients.from_config(shrunk)
    check2 = small_delay_condition(eq2)
    assert check2.all_satisfied
    assert np.all(check2.margins > 0.0)


def test_small_delay_boundary_is_strict():
    cfg = single_follower(tau=1.0 / 3.5)  # product exactly 1
    eq = EquilibriumCoefficients.from_config(cfg)
    check = small_delay_condition(eq)
    assert not bool(check.satisfied[0])
    assert check.margins[0] == pytest.approx(0.0, abs=1e-14)


# ---------------------------------------------------------------------------
# parameter-plane stability region
# ---------------------------------------------------------------------------


def test_region_margin_boundary_case():
    c = 0.7 * math.pi / 7.0
    rc = stability_region_margin(10.0, 2.0, 20.0, 1.0, c)
    assert rc.lhs == pytest.approx(5.0, rel=1e-14)
    assert rc.threshold == pytest.approx(5.0, rel=1e-14)
    assert not rc.stable  # boundary counts as not stable
    assert rc.margin == pytest.approx(0.0, abs=1e-12)


def test_region_margin_headway_independent_when_l_zero():
    a = stability_region_margin(10.0, 2.0, 5.0, 0.0, 0.3)
    bb = stability_region_margin(10.0, 2.0, 50.0, 0.0, 0.3)
    assert a.lhs == bb.lhs == pytest.approx(100.0, rel=1e-14)
    assert a.margin == bb.margin


def test_region_margin_degenerate_exponents():
    # m = l = 0 collapses the criterion to 1 < pi/(2c)
    assert stability_region_margin(10.0, 0.0, 20.0, 0.0, 1.0).stable
    assert not stability_region_margin(10.0, 0.0, 20.0, 0.0, 1.6).stable
