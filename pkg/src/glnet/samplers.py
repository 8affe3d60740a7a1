"""Inverse-transform samplers for wait times.

A uniform ``xi`` maps to ``sup{t : F(t) <= xi}``: ``+inf`` when ``xi`` is at or
above the defect threshold ``lim F``, otherwise the root of
``Lambda(t) = -ln(1 - xi)``.
"""
from __future__ import annotations

import math

from .errors import DomainError, NumericError
from .hazard import (
    WaitTimeLaw,
    closed_form_branch,
    defect_threshold,
    hazard_increment,
)
from .rng import RngStream

__all__ = [
    "inverse_cdf",
    "inverse_cdf_closed",
    "inverse_cdf_numeric",
    "sample_wait_time",
    "sample_geometric",
]

BISECTION_STEPS = 200
INVERSION_TOL = 1e-12


def _check_xi(xi):
    if not 0.0 <= xi < 1.0:
        raise DomainError(f"xi must lie in [0, 1), got {xi!r}")


def inverse_cdf_closed(law: WaitTimeLaw, xi: float) -> float:
    """Closed-form inverse; ``law`` must have a closed-form branch and ``xi``
    must be below its defect threshold."""
    branch = closed_form_branch(law)
    if branch is None:
        raise DomainError(f"no closed-form inverse for {law!r}")
    if xi == 0.0:
        return 0.0
    beta, r = law.phi.beta, law.phi.r
    mu, v0 = law.decay.mu, law.u0
    target = -math.log1p(-xi)  # Lambda(T) = -ln(1 - xi)

    if branch == "rational/gamma=1":
        v0r = v0**r
        arg = ((v0r + beta) * math.exp(-r * mu * target) - beta) / v0r
        if arg <= 0.0:
            return math.inf
        return -math.log(arg) / (r * mu)
    if branch == "monomial/gamma=1":
        # t = -ln(1 + r mu ln(1 - xi) / (beta V0^r)) / (mu r)
        arg = -r * mu * target / (beta * v0**r)
        if arg <= -1.0:
            return math.inf
        return -math.log1p(arg) / (mu * r)
    if branch == "rational1/gamma=2":
        return math.expm1(beta * mu * target) / mu * (1.0 / v0 + 1.0 / beta)
    if branch == "rational2/gamma=2":
        sb = math.sqrt(beta)
        angle = math.atan(v0 / sb) - mu * sb * target
        if angle <= 0.0:
            return math.inf
        return (1.0 / (sb * math.tan(angle)) - 1.0 / v0) / mu
    if branch == "monomial1/gamma=2":
        return math.expm1(mu * target / beta) / (mu * v0)
    if branch == "monomial_r>=2/gamma=2":
        # same potential-space equation as the gamma = 1 monomial of degree r - 1,
        # then the reciprocal decay converts the potential back to a time
        vr = v0 ** (r - 1) - (r - 1) * mu * target / beta
        if vr <= 0.0:
            return math.inf
        return law.decay.time_between(v0, vr ** (1.0 / (r - 1)))
    raise AssertionError(branch)


def inverse_cdf_numeric(law: WaitTimeLaw, xi: float, tol: float = INVERSION_TOL) -> float:
    """Bisection on the quadrature hazard.

    The bracket doubles from 1 until it covers the target, then at most
    ``BISECTION_STEPS`` halvings; the hazard at each new point is the
    previous endpoint's value plus the integral over the gap.
    """
    _check_xi(xi)
    if law.u0 == 0.0 or xi >= defect_threshold(law):
        return math.inf
    if xi == 0.0:
        return 0.0
    target = -math.log1p(-xi)

    lo, lam_lo = 0.0, 0.0
    hi = 1.0
    lam_hi = hazard_increment(law, lo, hi, tol)
    while lam_hi < target:
        if hi > 1e300:
            raise NumericError(f"could not bracket xi={xi!r} for {law!r}")
        lo, lam_lo = hi, lam_hi
        hi *= 2.0
        lam_hi = lam_lo + hazard_increment(law, lo, hi, tol)

    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        lam_mid = lam_lo + hazard_increment(law, lo, mid, tol)
        if lam_mid < target:
            lo, lam_lo = mid, lam_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def inverse_cdf(law: WaitTimeLaw, xi: float) -> float:
    """``G(xi)``: the wait time for uniform variate ``xi`` (``inf`` for a
    never-firing draw)."""
    _check_xi(xi)
    if law.u0 == 0.0 or xi >= defect_threshold(law):
        return math.inf
    if closed_form_branch(law) is None:
        return inverse_cdf_numeric(law, xi)
    return inverse_cdf_closed(law, xi)


def sample_wait_time(law: WaitTimeLaw, rng: RngStream) -> float:
    return inverse_cdf(law, rng.uniform())


def sample_geometric(p: float, rng: RngStream):
    """Number of Bernoulli(p) trials up to and including the first success.

    ``p = 0`` gives ``inf``.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    xi = rng.uniform()
    if p == 0.0:
        return math.inf
    if p == 1.0:
        return 1
    return max(1, math.ceil(math.log1p(-xi) / math.log1p(-p)))
