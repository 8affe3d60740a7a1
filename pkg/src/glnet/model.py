"""Network description: potential functions, decay laws and their validation.

Everything here is immutable once constructed, so a single ``NetworkConfig``
can be shared by any number of concurrently running replicas.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConfigError, DomainError

__all__ = [
    "Family",
    "PotentialFn",
    "DecayLaw",
    "NeuronSpec",
    "NetworkConfig",
    "ValidationReport",
    "eval_phi",
    "decay_value",
    "validate_config",
]

# Deterministic sample grids used by validate_config.
U_GRID = (0.0, 0.1, 0.5, 0.999, 1.0, 1.5, 2.0, 5.0, 10.0, 37.5, 100.0)
T_GRID = (0.0, 0.01, 0.1, 0.5, 1.0, 2.5, 10.0, 50.0)
AXIOM_TOL = 1e-9


class Family(str, enum.Enum):
    EXPONENTIAL = "exponential"
    RATIONAL = "rational"
    MONOMIAL = "monomial"


def _finite_positive(value, name):
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"expected a number, got {value!r}", name)
    if not math.isfinite(value):
        raise ConfigError(f"must be finite, got {value!r}", name)
    if value <= 0:
        raise ConfigError(f"must be positive, got {value!r}", name)


@dataclass(frozen=True)
class PotentialFn:
    """Maps a membrane potential to a firing propensity.

    * exponential: ``1 - exp(-beta * u)``
    * rational:    ``u**r / (u**r + beta)``
    * monomial:    ``beta * u**r``

    ``r`` is ignored by the exponential family.
    """

    family: Family
    beta: float = 1.0
    r: int = 1

    def __post_init__(self):
        try:
            fam = Family(self.family)
        except ValueError:
            raise ConfigError(
                f"unknown family {self.family!r}; expected one of "
                f"{[f.value for f in Family]}",
                "phi.family",
            ) from None
        object.__setattr__(self, "family", fam)
        _finite_positive(self.beta, "phi.beta")
        if fam is Family.EXPONENTIAL:
            object.__setattr__(self, "r", 1)
        elif (
            isinstance(self.r, bool)
            or not isinstance(self.r, int)
            or self.r < 1
        ):
            raise ConfigError(f"must be a positive integer, got {self.r!r}", "phi.r")

    @classmethod
    def exponential(cls, beta=1.0):
        return cls(Family.EXPONENTIAL, beta)

    @classmethod
    def rational(cls, r=1, beta=1.0):
        return cls(Family.RATIONAL, beta, r)

    @classmethod
    def monomial(cls, r=1, beta=1.0):
        return cls(Family.MONOMIAL, beta, r)

    @property
    def bounded(self):
        """True when the values stay inside [0, 1]."""
        return self.family is not Family.MONOMIAL

    @property
    def leading_coefficient(self):
        """``c`` in ``phi(u) ~ c * u**d`` as ``u -> 0``."""
        if self.family is Family.RATIONAL:
            return 1.0 / self.beta
        return self.beta

    def __call__(self, u):
        return eval_phi(self, u)


def eval_phi(phi: PotentialFn, u: float) -> float:
    if u < 0:
        raise DomainError(f"potential must be non-negative, got {u!r}")
    fam = phi.family
    if fam is Family.EXPONENTIAL:
        return -math.expm1(-phi.beta * u)
    ur = u**phi.r
    if fam is Family.RATIONAL:
        if math.isinf(ur):
            return 1.0
        return ur / (ur + phi.beta)
    return phi.beta * ur


@dataclass(frozen=True)
class DecayLaw:
    """Deterministic potential decay between discharges.

    ``kind="power"`` is the solution family of ``V' = -mu * V**gamma``.
    ``kind="symptomatic"`` is the fixture ``(u - floor(u)) e^{-t} + floor(u)``,
    which obeys the semigroup axioms but decays to zero only below 1; it exists
    so the death analysis has something to reject.
    """

    gamma: float = 1.0
    mu: float = 1.0
    kind: str = "power"

    def __post_init__(self):
        if self.kind not in ("power", "symptomatic"):
            raise ConfigError(f"unknown decay kind {self.kind!r}", "decay.kind")
        if self.kind == "symptomatic":
            return
        if (
            not isinstance(self.gamma, (int, float))
            or isinstance(self.gamma, bool)
            or not math.isfinite(self.gamma)
        ):
            raise ConfigError(f"must be a finite number, got {self.gamma!r}", "decay.gamma")
        if self.gamma < 1:
            raise ConfigError(f"must be >= 1, got {self.gamma!r}", "decay.gamma")
        _finite_positive(self.mu, "decay.mu")
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "mu", float(self.mu))

    @classmethod
    def symptomatic(cls):
        return cls(1.0, 1.0, "symptomatic")

    @property
    def is_power(self):
        return self.kind == "power"

    def __call__(self, u, t):
        return decay_value(self, u, t)

    def limit(self, u):
        """``lim_{t -> inf} V(u, t)``."""
        if self.kind == "symptomatic":
            return float(math.floor(u))
        return 0.0

    def time_between(self, u, v):
        """Time for a power-law decay to bring potential ``u`` down to ``v``.

        ``v <= 0`` is never reached and gives ``inf``.
        """
        if not self.is_power:
            raise DomainError("time_between is only defined for power-law decay")
        if v >= u:
            return 0.0
        if v <= 0:
            return math.inf
        g, mu = self.gamma, self.mu
        if g == 1.0:
            return math.log(u / v) / mu
        if g == 2.0:
            return (1.0 / v - 1.0 / u) / mu
        return (v ** (1.0 - g) - u ** (1.0 - g)) / ((g - 1.0) * mu)


def decay_value(law: DecayLaw, u: float, t: float) -> float:
    if u < 0 or t < 0:
        raise DomainError(f"decay needs u >= 0 and t >= 0, got u={u!r}, t={t!r}")
    if t == 0 or u == 0:
        return float(u)
    if law.kind == "symptomatic":
        whole = math.floor(u)
        return (u - whole) * math.exp(-t) + whole
    g, mu = law.gamma, law.mu
    if g == 1.0:
        return u * math.exp(-mu * t)
    if g == 2.0:
        return u / (1.0 + mu * t * u)
    if math.isinf(t):
        return 0.0
    # u * (1 + (g-1) mu t u^(g-1))^(1/(1-g)); avoids u^(1-g) overflowing for tiny u
    return u * (1.0 + (g - 1.0) * mu * t * u ** (g - 1.0)) ** (1.0 / (1.0 - g))


@dataclass(frozen=True)
class NeuronSpec:
    phi: PotentialFn
    decay: DecayLaw | None = None
    initial_potential: float = 0.0


@dataclass(frozen=True)
class NetworkConfig:
    """A finite network; ``weights[i][j]`` is the influence of ``i`` on ``j``.

    Diagonal weights are stored but never read by the dynamics: a neuron that
    fires is reset to zero regardless of its own input.
    """

    neurons: tuple
    weights: tuple

    def __init__(self, neurons: Sequence[NeuronSpec], weights):
        neurons = tuple(neurons)
        if not neurons:
            raise ConfigError("a network needs at least one neuron", "neurons")
        n = len(neurons)
        rows = tuple(tuple(float(w) for w in row) for row in weights)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ConfigError(f"must be a {n}x{n} matrix", "weights")
        for k, spec in enumerate(neurons):
            a = spec.initial_potential
            if not math.isfinite(a):
                raise ConfigError(f"must be finite, got {a!r}", f"neurons[{k}].initial_potential")
            if a < 0:
                raise ConfigError(f"must be >= 0, got {a!r}", f"neurons[{k}].initial_potential")
        for i, row in enumerate(rows):
            for j, w in enumerate(row):
                if not math.isfinite(w):
                    raise ConfigError(f"must be finite, got {w!r}", f"weights[{i}][{j}]")
        object.__setattr__(self, "neurons", neurons)
        object.__setattr__(self, "weights", rows)

    @property
    def size(self):
        return len(self.neurons)

    @property
    def initial_potentials(self):
        return tuple(float(s.initial_potential) for s in self.neurons)

    def outgoing(self):
        """Per presynaptic neuron, the list of ``(target, weight)`` with ``target != source``
        and non-zero weight."""
        return tuple(
            tuple((j, w) for j, w in enumerate(row) if j != i and w != 0.0)
            for i, row in enumerate(self.weights)
        )


@dataclass
class ValidationReport:
    axioms: dict = field(default_factory=dict)
    hypotheses: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def axioms_ok(self):
        return all(ok for checks in self.axioms.values() for ok in checks.values())

    @property
    def hypotheses_ok(self):
        return all(self.hypotheses.values())


def _check_decay(law: DecayLaw):
    identity = monotone_u = monotone_t = semigroup = True
    for u in U_GRID:
        if decay_value(law, u, 0.0) != u:
            identity = False
        for t in T_GRID:
            v = decay_value(law, u, t)
            for t2 in T_GRID:
                if t2 > t and decay_value(law, u, t2) > v:
                    monotone_t = False
                lhs = decay_value(law, u, t + t2)
                rhs = decay_value(law, v, t2)
                if abs(lhs - rhs) > AXIOM_TOL:
                    semigroup = False
            for u2 in U_GRID:
                if u2 > u and decay_value(law, u2, t) < v:
                    monotone_u = False
    return {
        "identity": identity,
        "monotone_in_u": monotone_u,
        "monotone_in_t": monotone_t,
        "semigroup": semigroup,
    }


def limit_regimen_ok(law: DecayLaw) -> bool:
    """Grid check that V(u, t) -> 0 exactly when u = 0 or every larger start also vanishes."""
    vanish = {u: law.limit(u) == 0.0 for u in U_GRID}
    for u in U_GRID:
        larger = all(vanish[v] for v in U_GRID if v > u)
        if vanish[u] != (u == 0.0 or larger):
            return False
    return True


def validate_config(cfg: NetworkConfig) -> ValidationReport:
    """Check the decay/potential axioms on a fixed grid and flag the death-criterion hypotheses.

    Axiom failures and hypothesis violations are reported, not raised; only
    malformed parameters raise ``ConfigError``.
    """
    report = ValidationReport()
    for k, spec in enumerate(cfg.neurons):
        a = spec.initial_potential
        if not math.isfinite(a):
            raise ConfigError(f"must be finite, got {a!r}", f"neurons[{k}].initial_potential")
        if a < 0:
            raise ConfigError(f"must be >= 0, got {a!r}", f"neurons[{k}].initial_potential")
        checks = {}
        if spec.decay is not None:
            checks.update(_check_decay(spec.decay))
        vals = [eval_phi(spec.phi, u) for u in U_GRID]
        checks["phi_monotone"] = all(x <= y for x, y in zip(vals, vals[1:]))
        checks["phi_zero_at_zero"] = vals[0] == 0.0
        report.axioms[k] = checks
        for name, ok in checks.items():
            if not ok:
                report.violations.append(f"neuron {k}: axiom {name} fails")

    negative = [
        (i, j)
        for i, row in enumerate(cfg.weights)
        for j, w in enumerate(row)
        if i != j and w < 0
    ]
    zero_start = [k for k, s in enumerate(cfg.neurons) if s.initial_potential <= 0]
    phi_zero = [
        k
        for k, s in enumerate(cfg.neurons)
        if any(eval_phi(s.phi, u) == 0.0 for u in U_GRID if u > 0)
    ]
    regimen = [
        k
        for k, s in enumerate(cfg.neurons)
        if s.decay is not None and not limit_regimen_ok(s.decay)
    ]
    report.hypotheses = {
        "nonnegative_weights": not negative,
        "positive_initial_potentials": not zero_start,
        "phi_vanishes_only_at_zero": not phi_zero,
        "decay_limit_regimen": not regimen,
    }
    for i, j in negative:
        report.violations.append(f"weights[{i}][{j}] is negative")
    for k in zero_start:
        report.violations.append(f"neuron {k}: initial potential is not positive")
    for k in phi_zero:
        report.violations.append(f"neuron {k}: phi vanishes at a positive potential")
    for k in regimen:
        report.violations.append(f"neuron {k}: decay has more than one limit regimen")
    return report
