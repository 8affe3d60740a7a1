"""Cumulative hazard and the (possibly defective) wait-time distribution of one neuron.

Between discharges a neuron with potential ``u0`` fires at rate
``lambda(s) = phi(V(u0, s))``. The wait time ``T`` satisfies
``P(T <= t) = 1 - exp(-Lambda(t))`` with ``Lambda(t) = int_0^t lambda``, and
``P(T = inf) = exp(-Lambda(inf))``, which is positive whenever the total hazard
is finite.

For ``V' = -mu V**gamma`` the substitution ``v = V(s)`` gives
``Lambda(t) = (1/mu) int_{V(t)}^{u0} phi(v) / v**gamma dv``; the closed forms
below are that integral for the six (family, gamma) pairs that have one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .death import classify_neuron, zero_order
from .errors import DomainError
from .model import DecayLaw, Family, PotentialFn, decay_value, eval_phi
from .quadrature import adaptive_simpson

__all__ = [
    "WaitTimeLaw",
    "closed_form_branch",
    "cumulative_hazard",
    "cumulative_hazard_numeric",
    "total_hazard",
    "cdf",
    "defect_threshold",
    "atom",
    "CLOSED_FORM_BRANCHES",
]

DEFAULT_TOL = 1e-9

CLOSED_FORM_BRANCHES = (
    "rational/gamma=1",
    "monomial/gamma=1",
    "rational1/gamma=2",
    "rational2/gamma=2",
    "monomial1/gamma=2",
    "monomial_r>=2/gamma=2",
)


@dataclass(frozen=True)
class WaitTimeLaw:
    phi: PotentialFn
    decay: DecayLaw
    u0: float

    def __post_init__(self):
        if not self.u0 >= 0:
            raise DomainError(f"u0 must be non-negative, got {self.u0!r}")

    def rate(self, s):
        return eval_phi(self.phi, decay_value(self.decay, self.u0, s))


def closed_form_branch(law: WaitTimeLaw):
    """Name of the closed-form branch covering ``law``, or None."""
    if not law.decay.is_power:
        return None
    fam, r, g = law.phi.family, law.phi.r, law.decay.gamma
    if g == 1.0:
        if fam is Family.RATIONAL:
            return "rational/gamma=1"
        if fam is Family.MONOMIAL:
            return "monomial/gamma=1"
    elif g == 2.0:
        if fam is Family.RATIONAL and r == 1:
            return "rational1/gamma=2"
        if fam is Family.RATIONAL and r == 2:
            return "rational2/gamma=2"
        if fam is Family.MONOMIAL:
            return "monomial1/gamma=2" if r == 1 else "monomial_r>=2/gamma=2"
    return None


def _closed_hazard(branch, law, t):
    beta, r = law.phi.beta, law.phi.r
    mu, v0 = law.decay.mu, law.u0
    if branch == "rational/gamma=1":
        # ln((V0^r + b) / (V^r + b)) written so that it never exceeds its limit
        v0r = v0**r
        vtr = 0.0 if math.isinf(t) else v0r * math.exp(-mu * r * t)
        return (math.log1p(v0r / beta) - math.log1p(vtr / beta)) / (r * mu)
    if branch == "monomial/gamma=1":
        return beta * v0**r * -math.expm1(-mu * r * t) / (r * mu)
    if branch == "rational1/gamma=2":
        # ln(V0 (V + b) / (V (V0 + b))) / (b mu), with 1/V = mu t + 1/V0
        return math.log1p(beta * mu * t * v0 / (v0 + beta)) / (beta * mu)
    if branch == "rational2/gamma=2":
        sb = math.sqrt(beta)
        vt = decay_value(law.decay, v0, t)
        return (math.atan(v0 / sb) - math.atan(vt / sb)) / (sb * mu)
    if branch == "monomial1/gamma=2":
        return beta / mu * math.log1p(v0 * mu * t)
    if branch == "monomial_r>=2/gamma=2":
        vt = decay_value(law.decay, v0, t)
        return beta * (v0 ** (r - 1) - vt ** (r - 1)) / ((r - 1) * mu)
    raise AssertionError(branch)


def cumulative_hazard(law: WaitTimeLaw, t: float) -> float:
    """``Lambda(t)``; closed form where one exists, quadrature otherwise."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t!r}")
    if law.u0 == 0 or t == 0:
        return 0.0
    if math.isinf(t):
        return total_hazard(law)
    branch = closed_form_branch(law)
    if branch is None:
        return cumulative_hazard_numeric(law, t)
    return _closed_hazard(branch, law, t)


def _panels(a, b):
    """Split ``[a, b]`` into pieces whose length doubles from 1."""
    edges = [a]
    step = 1.0
    while edges[-1] + step < b:
        edges.append(edges[-1] + step)
        step *= 2.0
    edges.append(b)
    return edges


def hazard_increment(law: WaitTimeLaw, a: float, b: float, tol=DEFAULT_TOL) -> float:
    """``Lambda(b) - Lambda(a)`` by adaptive Simpson in the time domain."""
    if b <= a or law.u0 == 0:
        return 0.0
    edges = _panels(a, b)
    eps = tol / (len(edges) - 1)
    rate = law.rate
    return sum(adaptive_simpson(rate, lo, hi, eps) for lo, hi in zip(edges, edges[1:]))


def cumulative_hazard_numeric(law: WaitTimeLaw, t: float, tol: float = DEFAULT_TOL) -> float:
    """Quadrature of ``s -> phi(V(u0, s))`` over ``[0, t]``.

    Independent of the closed forms; used as their oracle and as the
    evaluation path for laws that have none.
    """
    if not (t >= 0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and non-negative, got {t!r}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    return hazard_increment(law, 0.0, t, tol)


def _total_hazard_quadrature(law: WaitTimeLaw, tol=DEFAULT_TOL):
    """``(1/mu) int_0^{u0} phi(v) / v**gamma dv`` for a finite-hazard law.

    The substitution ``v = u0 * w**m`` turns the integrable singularity at
    zero into a bounded integrand.
    """
    phi, g, mu, v0 = law.phi, law.decay.gamma, law.decay.mu, law.u0
    d = zero_order(phi)
    excess = d - g + 1.0  # > 0 for finite-hazard laws
    m = max(1, math.ceil(1.0 / excess))
    power = m * excess - 1.0
    at_zero = phi.leading_coefficient * m * v0**excess if power == 0 else 0.0

    def integrand(w):
        if w == 0.0:
            return at_zero
        v = v0 * w**m
        if v == 0.0:
            return at_zero
        return eval_phi(phi, v) / v**g * m * v0 * w ** (m - 1)

    return adaptive_simpson(integrand, 0.0, 1.0, tol) / mu


def total_hazard(law: WaitTimeLaw) -> float:
    """``Lambda(inf)``, possibly ``inf``.

    Finiteness is decided from the order of the zero of phi, never by
    integrating to a cutoff.
    """
    if law.u0 == 0:
        return 0.0
    decay = law.decay
    if not decay.is_power:
        if decay.limit(law.u0) > 0:
            return math.inf
        # below 1 the fixture decays exactly like gamma = 1, mu = 1
        return total_hazard(WaitTimeLaw(law.phi, DecayLaw(1.0, 1.0), law.u0))
    if classify_neuron(law.phi, decay).cls == "R":
        return math.inf
    branch = closed_form_branch(law)
    if branch is not None:
        return _closed_hazard(branch, law, math.inf)
    return _total_hazard_quadrature(law)


def cdf(law: WaitTimeLaw, t: float) -> float:
    """``F(t) = P(T <= t)`` for finite ``t``; ``F(inf) = 1``."""
    if math.isinf(t):
        return 1.0
    return -math.expm1(-cumulative_hazard(law, t))


def defect_threshold(law: WaitTimeLaw) -> float:
    """``lim_{t -> inf} F(t) = P(T < inf)``."""
    return -math.expm1(-total_hazard(law))


def atom(law: WaitTimeLaw) -> float:
    """``P(T = inf)``."""
    return math.exp(-total_hazard(law))
