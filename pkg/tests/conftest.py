"""Shared builders for the test suite.

Two configurations recur throughout: a single follower held exactly at its
oscillation threshold, and a four-vehicle platoon whose third pair sits on
the instability boundary while the others are damped.
"""

import math

import numpy as np
import pytest

from ccfmlab.model import LeaderProfile, PlatoonConfig, VehicleParams


def single_follower(kappa=1.0, tau=math.pi / 7):
    """One vehicle with beta* = 3.5; at tau = pi/7 the product is exactly pi/2."""
    return PlatoonConfig(
        vehicles=(VehicleParams(alpha=0.7, tau=tau, b=20.0),),
        m=2.0,
        l=1.0,
        leader=LeaderProfile(v_eq=10.0, ramp=10.0),
        kappa=kappa,
    )


def four_vehicle_platoon(taus=(0.5, 0.4, 0.4488, 0.3), kappa=1.0):
    """Four followers with beta* = (2.5, 3.0, 3.5, 4.0) at the 10 m/s operating point.

    With the default delays the pair products are (1.25, 1.2, 1.5708, 1.2):
    pair 3 is marginally past the oscillation threshold, the rest are inside it.
    """
    alphas = (0.5, 0.6, 0.7, 0.8)
    vehicles = tuple(
        VehicleParams(alpha=a, tau=t, b=20.0) for a, t in zip(alphas, taus)
    )
    return PlatoonConfig(
        vehicles=vehicles,
        m=2.0,
        l=1.0,
        leader=LeaderProfile(v_eq=10.0, ramp=10.0),
        kappa=kappa,
    )


def newton_root(beta_star, tau, kappa, seed, iters=80):
    """Solve lam + kappa*beta_star*exp(-lam*tau) = 0 by Newton from a given seed.

    Deliberately independent of the package's own solver: this tracks whichever
    root the seed is closest to, not necessarily the rightmost one.
    """
    lam = complex(seed)
    a = kappa * beta_star
    for _ in range(iters):
        ex = a * np.exp(-lam * tau)
        f = lam + ex
        fp = 1.0 - tau * ex
        step = f / fp
        lam = lam - step
        if abs(step) < 1e-16 * max(1.0, abs(lam)):
            break
    return lam


def numeric_crossing_speed(beta_star, tau, n, rel_h=1e-6):
    """d(Re lambda)/d(kappa) at the Hopf gain, by central-difference continuation.

    The branch-n root is followed with Newton seeded at i*(2n+1)*pi/(2*tau);
    for n > 0 this is not the rightmost root, so root tracking (rather than
    a dominant-root query) is essential.
    """
    kappa_cr = (2 * n + 1) * math.pi / (2.0 * beta_star * tau)
    omega0 = (2 * n + 1) * math.pi / (2.0 * tau)
    h = rel_h * kappa_cr
    lam_hi = newton_root(beta_star, tau, kappa_cr + h, 1j * omega0)
    lam_lo = newton_root(beta_star, tau, kappa_cr - h, 1j * omega0)
    return (lam_hi.real - lam_lo.real) / (2.0 * h)


@pytest.fixture
def critical_config():
    return single_follower()


@pytest.fixture
def platoon_config():
    return four_vehicle_platoon()
