"""Spectral analysis of the linearized pair dynamics.

Each decoupled pair contributes the scalar delayed characteristic equation

    F(lambda) = lambda + kappa * beta* * exp(-lambda * tau) = 0,

whose root structure is governed entirely by the product kappa*beta**tau.
Three regimes follow from classical delay-equation theory:

* product <= 1/e        -- non-oscillatory stable (dominant root real),
* 1/e < product < pi/2  -- oscillatory stable (dominant pair complex, Re < 0),
* product >= pi/2       -- unstable.

The dominant (rightmost) root is computed by Newton iteration on the
transformed equation u*exp(u) = -kappa*beta**tau with u = lambda*tau, seeded
by a square-root series at the branch point and an asymptotic/continuation
seed beyond it, and is then certified rightmost by an argument-principle
winding count over a rectangle to its right.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidConfigError, RootSolveError
from .model import EquilibriumCoefficients

__all__ = [
    "Regime",
    "StabilityVerdict",
    "CharacteristicRoot",
    "HopfPoint",
    "RegionCheck",
    "SmallDelayCheck",
    "classify_pair",
    "classify_platoon",
    "dominant_root",
    "winding_zero_count",
    "no_delay_spectrum",
    "small_delay_condition",
    "hopf_point",
    "critical_delay",
    "critical_gain",
    "transversality",
    "stability_region_margin",
]

_INV_E = 1.0 / math.e
_HALF_PI = 0.5 * math.pi


class Regime(str, Enum):
    NON_OSCILLATORY_STABLE = "NonOscillatoryStable"
    OSCILLATORY_STABLE = "OscillatoryStable"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class StabilityVerdict:
    """Classification of one pair by its stability product kappa*beta**tau."""

    pair: int | None
    beta_star: float
    tau: float
    product: float
    regime: Regime
    margin_nonoscillatory: float  # 1/e - product (positive inside the monotone regime)
    margin_instability: float  # pi/2 - product (positive while stable)

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "beta_star": self.beta_star,
            "tau": self.tau,
            "product": self.product,
            "regime": self.regime.value,
            "margins": {
                "nonoscillatory": self.margin_nonoscillatory,
                "instability": self.margin_instability,
            },
        }


def classify_pair(beta_star: float, tau: float, kappa: float = 1.0, pair: int | None = None) -> StabilityVerdict:
    """Classify one pair from beta* and tau (boundaries: <=1/e, <pi/2)."""
    if beta_star <= 0 or tau < 0 or kappa <= 0:
        raise InvalidConfigError(f"need beta* > 0, tau >= 0, kappa > 0; got {beta_star}, {tau}, {kappa}")
    product = kappa * beta_star * tau
    if product <= _INV_E:
        regime = Regime.NON_OSCILLATORY_STABLE
    elif product < _HALF_PI:
        regime = Regime.OSCILLATORY_STABLE
    else:
        regime = Regime.UNSTABLE
    return StabilityVerdict(
        pair=pair,
        beta_star=beta_star,
        tau=tau,
        product=product,
        regime=regime,
        margin_nonoscillatory=_INV_E - product,
        margin_instability=_HALF_PI - product,
    )


def classify_platoon(eq: EquilibriumCoefficients, kappa: float = 1.0) -> list[StabilityVerdict]:
    """Classify every pair of a platoon; pair indices are 1-based."""
    return [
        classify_pair(float(b), float(t), kappa=kappa, pair=i)
        for i, (b, t) in enumerate(zip(eq.beta, eq.taus), start=1)
    ]


# ---------------------------------------------------------------------------
# Dominant root of lambda + a*exp(-lambda*tau) = 0
# ---------------------------------------------------------------------------

_EPS = np.finfo(float).eps
# Series for the principal solution of u*exp(u) = p about the branch point
# p = -1/e, in powers of s = sqrt(2*(1 + e*p)).
_BRANCH_SERIES = (-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0, -221.0 / 8505.0)


def _newton_uexpu(u: complex, p: float, tol: float = 1e-15, maxit: int = 80) -> complex:
    """Newton iteration on f(u) = u*exp(u) - p from the given seed."""
    for _ in range(maxit):
        eu = cmath.exp(u)
        f = u * eu - p
        fp = eu * (1.0 + u)
        if fp == 0:
            break
        du = f / fp
        u -= du
        if abs(du) <= tol * (1.0 + abs(u)):
            return u
    return u


def _principal_uexpu(p: float) -> complex:
    """Principal solution u of u*exp(u) = p for real p <= 0.

    Returns the root with Im(u) in [0, pi); real for p in [-1/e, 0].  Within
    floating-point resolution of the branch point p = -1/e the double root
    -1 is returned exactly, so boundary inputs produce the boundary root.
    """
    if p > 0:
        raise InvalidConfigError(f"argument must be <= 0, got {p}")
    if p == 0.0:
        return 0.0 + 0.0j
    ep1 = 1.0 + math.e * p
    if abs(ep1) <= 64.0 * _EPS:
        return -1.0 + 0.0j
    if abs(ep1) <= 0.25:
        # Branch-point series seed (s imaginary when p < -1/e).
        s = cmath.sqrt(2.0 * ep1)
        u = 0.0 + 0.0j
        for coeff in reversed(_BRANCH_SERIES):
            u = u * s + coeff
        u = _newton_uexpu(u, p)
    elif p < -_INV_E:
        # Beyond the branch point: continuation along the negative real axis,
        # walking p from just past -1/e out to its target.  The root moves
        # smoothly up the strip 0 < Im(u) < pi, so a short geometric walk with
        # Newton polish at each stop is robust for any magnitude.
        p_start = -1.25 * _INV_E
        s = cmath.sqrt(2.0 * (1.0 + math.e * p_start))
        u = 0.0 + 0.0j
        for coeff in reversed(_BRANCH_SERIES):
            u = u * s + coeff
        u = _newton_uexpu(u, p_start)
        steps = max(1, int(math.ceil(4.0 * math.log(p / p_start))))
        ratio = (p / p_start) ** (1.0 / steps)
        pk = p_start
        for _ in range(steps):
            pk *= ratio
            u = _newton_uexpu(u, pk)
        u = _newton_uexpu(u, p)
    else:
        # Real zone away from the branch point: f is increasing and convex on
        # (-1, inf), so Newton from 0 descends monotonically to the root.
        u = _newton_uexpu(0.0 + 0.0j, p)
    if abs(u * cmath.exp(u) - p) > 1e-13 * max(1.0, abs(p)):
        raise RootSolveError(f"principal-branch solve failed for p = {p!r}")
    if u.imag < 0:
        u = u.conjugate()
    return u


@dataclass(frozen=True)
class CharacteristicRoot:
    """Rightmost root of lambda + a*exp(-lambda*tau), with its certificate."""

    lam: complex
    residual: float
    verified: bool
    right_count: int | None


def _deep_real_root_scaled(c: float) -> float:
    """Larger solution x of x*exp(-x) = c on (1, inf) (the deeper real root)."""
    lo, hi = 1.0, max(3.0, -2.0 * math.log(c) + 5.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(-mid) > c:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13 * hi:
            break
    return 0.5 * (lo + hi)


def _certify_rightmost(a: float, tau: float, lam: complex) -> int:
    """Argument-principle certificate that lam is the rightmost root.

    Counts all zeros of lambda + a*exp(-lambda*tau) in a tall rectangle whose
    left edge sits a root-spacing-scaled distance d below Re(lam), and checks
    the count against the analytically known roots there: lam itself (double
    at the branch point), its conjugate, or its real-branch partner.  The edge
    distance is grown if a known root falls too close to the contour, keeping
    every phase kink resolvable by the sampled winding number.  Roots outside
    the rectangle's height lie far deeper in the left half-plane, so a
    matching count proves nothing else lies to the right of lam.

    Returns the number of unexpected zeros strictly right of the certified
    line (0 on success).
    """
    u = lam * tau
    c = a * tau
    if abs(u + 1.0) < 1e-6:
        known = [(lam, 2)]  # branch-point double root (within float resolution)
    elif abs(lam.imag) > 0.0:
        known = [(lam, 1), (lam.conjugate(), 1)]
    else:
        partner = -_deep_real_root_scaled(c) / tau
        known = [(lam, 1), (partner, 1)]
    margin = 0.07 / tau
    d = 0.3 / tau
    for _ in range(8):
        re_lo = lam.real - d
        if any(abs(root.real - re_lo) < margin for root, _ in known):
            d *= 1.23
            continue
        expected = sum(mult for root, mult in known if root.real > re_lo)
        count = winding_zero_count(
            a, tau, re_lo, lam.real + 50.0 / tau, -100.0 / tau, 100.0 / tau
        )
        return count - expected
    raise RootSolveError("could not place a counting contour clear of the known roots")


def winding_zero_count(
    a: float,
    tau: float,
    re_lo: float,
    re_hi: float,
    im_lo: float,
    im_hi: float,
    samples: int = 4096,
) -> int:
    """Count zeros of lambda + a*exp(-lambda*tau) inside a rectangle.

    Argument-principle winding number of the image of the rectangle boundary,
    computed from dense samples with phase unwrapping.  Sampling is doubled
    until consecutive phase increments are all below pi/2 (so no winding can
    slip between samples) and the count is integer-consistent.
    """
    if not (re_lo < re_hi and im_lo < im_hi):
        raise InvalidConfigError("rectangle must have positive extent")

    def boundary(num: int) -> np.ndarray:
        # Staggered samples (never exactly at edge midpoints or corners), so a
        # zero aligned with an edge's midline cannot coincide with a sample.
        frac = (np.arange(num) + 0.5) / num
        bottom = re_lo + (re_hi - re_lo) * frac
        right = re_hi + 1j * (im_lo + (im_hi - im_lo) * frac)
        top = re_hi - (re_hi - re_lo) * frac
        left = re_lo + 1j * (im_hi - (im_hi - im_lo) * frac)
        return np.concatenate(
            [bottom + 1j * im_lo, right, top + 1j * im_hi, left]
        )

    num = samples
    while True:
        z = boundary(num)
        vals = z + a * np.exp(-tau * z)
        mag = np.abs(vals)
        if mag.min() < 1e-12 * max(1.0, abs(a)):
            raise RootSolveError("a zero lies (numerically) on the counting contour")
        phases = np.unwrap(np.angle(np.append(vals, vals[0])))
        increments = np.abs(np.diff(phases))
        total = (phases[-1] - phases[0]) / (2.0 * math.pi)
        count = round(total)
        if increments.max() < 0.5 * math.pi and abs(total - count) < 1e-6:
            return int(count)
        num *= 2
        if num > 2**20:
            raise RootSolveError("winding count did not stabilize under refinement")


def dominant_root(
    beta_star: float,
    tau: float,
    kappa: float = 1.0,
    verify: bool = True,
) -> CharacteristicRoot:
    """Rightmost characteristic root of one pair.

    Solves u*exp(u) = -kappa*beta_star*tau (u = lambda*tau) by seeded Newton
    iteration, polishes in the lambda variable, and (optionally) certifies
    rightmost-ness with an argument-principle zero count over a tall rectangle
    enclosing the root.  The complex member of a conjugate pair with positive
    imaginary part is returned.
    """
    if beta_star <= 0 or tau < 0 or kappa <= 0:
        raise InvalidConfigError(f"need beta* > 0, tau >= 0, kappa > 0; got {beta_star}, {tau}, {kappa}")
    a = kappa * beta_star
    if tau == 0.0:
        return CharacteristicRoot(lam=complex(-a, 0.0), residual=0.0, verified=True, right_count=0)
    u = _principal_uexpu(-a * tau)
    lam = u / tau
    # Polish directly on F(lambda) to push the absolute residual to the floor.
    for _ in range(3):
        ex = cmath.exp(-lam * tau)
        f = lam + a * ex
        # F' vanishes at the branch-point double root; polishing there would
        # divide by ~0 and fling the iterate away, so leave the seed as is.
        fp = 1.0 - a * tau * ex
        if abs(fp) < 1e-6 or abs(f) == 0:
            break
        lam -= f / fp
    residual = abs(lam + a * cmath.exp(-lam * tau))
    if residual > 1e-12:
        raise RootSolveError(
            f"dominant-root residual {residual:.3e} exceeds 1e-12 for beta*={beta_star}, tau={tau}, kappa={kappa}"
        )
    count = None
    verified = False
    if verify:
        count = _certify_rightmost(a, tau, lam)
        if count != 0:
            raise RootSolveError(
                f"rightmost-ness verification failed: {count} unexpected zero(s) right of Re = {lam.real:.6g}"
            )
        verified = True
    if lam.imag < 0:
        lam = lam.conjugate()
    return CharacteristicRoot(lam=lam, residual=residual, verified=verified, right_count=count)


# ---------------------------------------------------------------------------
# Delay-free and small-delay checks
# ---------------------------------------------------------------------------


def no_delay_spectrum(eq: EquilibriumCoefficients, kappa: float = 1.0) -> np.ndarray:
    """Eigenvalues of the v-block with all delays set to zero: -kappa*beta*_i.

    The y-block contributes N additional neutral (zero) eigenvalues, which are
    omitted; the returned array is always strictly negative.
    """
    return -kappa * np.asarray(eq.beta, dtype=float)


@dataclass(frozen=True)
class SmallDelayCheck:
    """Per-pair products kappa*beta*_i*tau_i against the small-delay threshold 1."""

    products: np.ndarray
    satisfied: np.ndarray

    @property
    def margins(self) -> np.ndarray:
        return 1.0 - self.products

    @property
    def all_satisfied(self) -> bool:
        return bool(np.all(self.satisfied))


def small_delay_condition(eq: EquilibriumCoefficients, kappa: float = 1.0) -> SmallDelayCheck:
    """First-order-in-delay stability condition kappa*beta*_i*tau_i < 1 per pair.

    Expanding each delayed term to first order turns the pair dynamics into an
    ODE whose poles are -kappa*beta*_i / (1 - kappa*beta*_i*tau_i); these stay
    negative exactly while every product is below one.
    """
    products = kappa * np.asarray(eq.beta, dtype=float) * np.asarray(eq.taus, dtype=float)
    return SmallDelayCheck(products=products, satisfied=products < 1.0)


# ---------------------------------------------------------------------------
# Hopf point, transversality, design margin
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HopfPoint:
    """Imaginary-axis crossing of one pair: frequency, critical gain, residual."""

    omega0: float
    kappa_cr: float
    n: int
    residual: float


def hopf_point(beta_star: float, tau: float, n: int = 0) -> HopfPoint:
    """Crossing frequency and critical gain of branch n (n even, n >= 0).

    omega0 = (2n+1)*pi/(2*tau) and kappa_cr = (2n+1)*pi/(2*beta**tau); at these
    values exp(-i*omega0*tau) = -i cancels the characteristic equation exactly.
    Odd n would require a negative gain, which has no meaning here, and is
    rejected.
    """
    if beta_star <= 0 or tau <= 0:
        raise InvalidConfigError(f"need beta* > 0 and tau > 0, got {beta_star}, {tau}")
    if n < 0 or n % 2 == 1:
        raise InvalidConfigError(f"branch index n must be even and >= 0, got {n}")
    omega0 = (2 * n + 1) * _HALF_PI / tau
    kappa_cr = (2 * n + 1) * _HALF_PI / (beta_star * tau)
    residual = abs(1j * omega0 + kappa_cr * beta_star * cmath.exp(-1j * omega0 * tau))
    return HopfPoint(omega0=omega0, kappa_cr=kappa_cr, n=n, residual=residual)


def critical_delay(beta_star: float, kappa: float = 1.0, n: int = 0) -> float:
    """Delay at which branch n crosses the imaginary axis for the given gain."""
    if beta_star <= 0 or kappa <= 0:
        raise InvalidConfigError(f"need beta* > 0 and kappa > 0, got {beta_star}, {kappa}")
    if n < 0 or n % 2 == 1:
        raise InvalidConfigError(f"branch index n must be even and >= 0, got {n}")
    return (2 * n + 1) * _HALF_PI / (kappa * beta_star)


def critical_gain(beta_star: float, tau: float, n: int = 0) -> float:
    """Gain at which branch n crosses the imaginary axis for the given delay."""
    return hopf_point(beta_star, tau, n=n).kappa_cr


def transversality(beta_star: float, tau: float, n: int = 0) -> float:
    """Crossing speed alpha'(0) = Re[d lambda / d kappa] at the branch-n Hopf point.

    Implicit differentiation of the characteristic equation gives
    d lambda/d kappa = lambda / (kappa * (1 + tau*lambda)); evaluating at
    lambda = i*omega0, kappa = kappa_cr yields the closed form

        2 * beta* * tau**2 * omega0**2 / ((2n+1) * pi * (1 + tau**2 * omega0**2)),

    which is strictly positive: the root pair always crosses rightward.
    """
    hp = hopf_point(beta_star, tau, n=n)
    w2 = tau * tau * hp.omega0 * hp.omega0
    return 2.0 * beta_star * w2 / ((2 * n + 1) * math.pi * (1.0 + w2))


@dataclass(frozen=True)
class RegionCheck:
    """Design-rule check (x0dot**m / b**l) < pi/(2c) with c = alpha*tau."""

    lhs: float
    threshold: float
    stable: bool
    margin: float


def stability_region_margin(x0dot: float, m: float, b: float, l: float, c: float) -> RegionCheck:
    """Evaluate the closed-form stability region for one pair.

    c = alpha*tau aggregates sensitivity and delay; the pair is (marginally)
    oscillatory-unstable once x0dot**m / b**l reaches pi/(2c).
    """
    if x0dot <= 0 or b <= 0 or c <= 0:
        raise InvalidConfigError(f"need x0dot > 0, b > 0, c > 0; got {x0dot}, {b}, {c}")
    lhs = x0dot**m / b**l
    threshold = _HALF_PI / c
    return RegionCheck(lhs=lhs, threshold=threshold, stable=lhs < threshold, margin=threshold - lhs)
