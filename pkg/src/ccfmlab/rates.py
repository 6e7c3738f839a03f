"""Exponential convergence rates of a stable pair, and their dependence on delay.

For a stable pair the asymptotic decay e^{-sigma*t} of perturbations is set by
the rightmost characteristic root.  Writing c = kappa*beta**tau, the decay
rate sigma solves one of three real equations, depending on where c sits:

* c < 1/e   -- the dominant root is real, lambda = -sigma2, with
               (sigma2*tau) * exp(-sigma2*tau) = c  (smaller solution);
* c = 1/e   -- double real root, sigma1 = 1/tau (the fastest possible decay);
* c > 1/e   -- the dominant roots are a complex pair -sigma3 +/- i*omega with
               omega*tau = mu in (0, pi/2) for a stable pair, where
               (mu/sin mu) * exp(-mu/tan mu) = c  and  sigma3 = mu/(tau*tan mu).

As a function of tau (fixed gain), the rate rises on the real branch, peaks at
tau* = 1/(c'e) -- i.e. kappa*beta**tau = 1/e, where the rate equals
kappa*beta**e -- and falls on the oscillatory branch, reaching zero at the
stability boundary kappa*beta**tau = pi/2.  All solvers here are safeguarded
Newton iterations on the real branch equations; the spectral module computes
the same quantity through the complex dominant root, and the two routes are
held to agree in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import InvalidConfigError, RootSolveError, UnstableRegimeError
from .model import beta_star as _beta_star

__all__ = [
    "RateResult",
    "RateCurvePoint",
    "rate_of_convergence",
    "optimal_delay",
    "peak_rate",
    "rate_curve",
]

_INV_E = 1.0 / math.e
_HALF_PI = 0.5 * math.pi
_BOUNDARY_TOL = 1e-12


def _safeguarded_newton(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    lo: float,
    hi: float,
    x0: float | None = None,
    tol: float = 1e-15,
    maxit: int = 200,
) -> float:
    """Newton iteration with a bisection fallback on a sign-changing bracket."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise RootSolveError(f"no sign change on bracket [{lo:.6g}, {hi:.6g}]")
    x = 0.5 * (lo + hi) if x0 is None else x0
    for _ in range(maxit):
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx < 0) == (flo < 0):
            lo = x
        else:
            hi = x
        fp = fprime(x)
        step_ok = fp != 0
        if step_ok:
            xn = x - fx / fp
            step_ok = lo < xn < hi
        if not step_ok:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= tol * (1.0 + abs(xn)):
            return xn
        x = xn
    raise RootSolveError(f"root solve did not converge on [{lo:.6g}, {hi:.6g}]")


def _sigma2_scaled(c: float) -> float:
    """Smaller solution x of x*exp(-x) = c on [0, 1) (real-branch rate times tau)."""

    def f(x: float) -> float:
        return x * math.exp(-x) - c

    def fp(x: float) -> float:
        return math.exp(-x) * (1.0 - x)

    x = _safeguarded_newton(f, fp, 0.0, 1.0, x0=min(c * math.e * 0.9, 0.9))
    if abs(f(x)) > 1e-12:
        raise RootSolveError(f"real-branch residual too large at c = {c!r}")
    return x


def _mu_of_c(c: float) -> float:
    """Solution mu of (mu/sin mu)*exp(-mu/tan mu) = c on (0, pi/2].

    The left side increases from 1/e (mu -> 0) to pi/2 (mu = pi/2), so a
    unique solution exists exactly for c in (1/e, pi/2].
    """

    def g(mu: float) -> float:
        return (mu / math.sin(mu)) * math.exp(-mu / math.tan(mu)) - c

    def gp(mu: float) -> float:
        val = (mu / math.sin(mu)) * math.exp(-mu / math.tan(mu))
        s = math.sin(mu)
        return val * (1.0 / mu - 2.0 / math.tan(mu) + mu / (s * s))

    lo = 1e-8
    if g(lo) >= 0.0:
        # c is within ~1e-16 of 1/e; the series G = (1/e)(1 + mu^2/2) gives mu.
        return math.sqrt(max(2.0 * (c * math.e - 1.0) / math.e, 0.0)) * math.sqrt(math.e)
    mu = _safeguarded_newton(g, gp, lo, _HALF_PI)
    if abs(g(mu)) > 1e-12:
        raise RootSolveError(f"oscillatory-branch residual too large at c = {c!r}")
    return mu


@dataclass(frozen=True)
class RateResult:
    """Decay rate of a stable pair and the real-equation branches behind it.

    Branch values are None when the branch has no solution at this c;
    ``dominant`` is the actual asymptotic decay rate.  ``tau_star`` is the
    rate-maximizing delay for this gain and ``regime`` records where the
    requested delay sits relative to it ('below' | 'at' | 'above').
    """

    product: float
    sigma1: float | None
    sigma2: float | None
    sigma3: float | None
    dominant: float
    branch: str  # 'real' | 'boundary' | 'complex'
    tau_star: float
    regime: str


def rate_of_convergence(beta_star: float, tau: float, kappa: float = 1.0) -> RateResult:
    """Asymptotic decay rate of one pair (requires a stable pair).

    Raises UnstableRegimeError when kappa*beta**tau >= pi/2: no decay rate
    exists there.
    """
    if beta_star <= 0 or tau < 0 or kappa <= 0:
        raise InvalidConfigError(f"need beta* > 0, tau >= 0, kappa > 0; got {beta_star}, {tau}, {kappa}")
    a = kappa * beta_star
    ts = 1.0 / (a * math.e)
    if tau == 0.0:
        return RateResult(
            product=0.0, sigma1=None, sigma2=a, sigma3=None, dominant=a,
            branch="real", tau_star=ts, regime="below",
        )
    c = a * tau
    if c >= _HALF_PI:
        raise UnstableRegimeError(
            f"kappa*beta**tau = {c:.6g} >= pi/2: the pair is not asymptotically stable"
        )
    if abs(c - _INV_E) <= _BOUNDARY_TOL:
        sigma = 1.0 / tau
        return RateResult(
            product=c, sigma1=sigma, sigma2=sigma, sigma3=sigma, dominant=sigma,
            branch="boundary", tau_star=ts, regime="at",
        )
    if c < _INV_E:
        sigma2 = _sigma2_scaled(c) / tau
        return RateResult(
            product=c, sigma1=1.0 / tau, sigma2=sigma2, sigma3=None, dominant=sigma2,
            branch="real", tau_star=ts, regime="below",
        )
    mu = _mu_of_c(c)
    sigma3 = mu / (tau * math.tan(mu))
    return RateResult(
        product=c, sigma1=1.0 / tau, sigma2=None, sigma3=sigma3, dominant=sigma3,
        branch="complex", tau_star=ts, regime="above",
    )


def optimal_delay(beta_star: float, kappa: float = 1.0) -> float:
    """Delay maximizing the decay rate: tau* = 1/(kappa*beta**e)."""
    if beta_star <= 0 or kappa <= 0:
        raise InvalidConfigError(f"need beta* > 0 and kappa > 0, got {beta_star}, {kappa}")
    return 1.0 / (kappa * beta_star * math.e)


def peak_rate(beta_star: float, kappa: float = 1.0) -> float:
    """Best achievable decay rate over all delays: kappa*beta**e, attained at tau*."""
    if beta_star <= 0 or kappa <= 0:
        raise InvalidConfigError(f"need beta* > 0 and kappa > 0, got {beta_star}, {kappa}")
    return kappa * beta_star * math.e


@dataclass(frozen=True)
class RateCurvePoint:
    l: float
    tau: float
    rate: float  # nan when the pair is unstable at this delay
    branch: str  # 'real' | 'boundary' | 'complex' | 'unstable'


def rate_curve(
    alpha: float,
    x0dot: float,
    m: float,
    b: float,
    l_values: Sequence[float],
    taus: Iterable[float],
    kappa: float = 1.0,
) -> list[RateCurvePoint]:
    """Decay rate versus delay for each headway exponent l in l_values.

    Unstable (l, tau) combinations are flagged with branch 'unstable' and a
    NaN rate rather than raising, so full sweeps always complete.
    """
    taus = list(taus)
    points: list[RateCurvePoint] = []
    for l in l_values:
        bstar = _beta_star(alpha, x0dot, m, b, l)
        for tau in taus:
            try:
                res = rate_of_convergence(bstar, tau, kappa=kappa)
                points.append(RateCurvePoint(l=l, tau=tau, rate=res.dominant, branch=res.branch))
            except UnstableRegimeError:
                points.append(RateCurvePoint(l=l, tau=tau, rate=float("nan"), branch="unstable"))
    return points
