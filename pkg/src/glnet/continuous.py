"""Event-driven simulation of the continuous-time network.

From potentials ``U`` every neuron draws an independent wait time from its
wait-time law; the smallest wait decides the next discharge. Between events
each potential follows its decay law; at an event the fired neurons reset to
zero and every other neuron adds the weights it receives, clamped at zero.
If every wait is infinite the system is dead and nothing fires again.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, ZenoError
from .hazard import WaitTimeLaw
from .model import NetworkConfig, decay_value
from .rng import RngStream
from .samplers import sample_wait_time

__all__ = [
    "Termination",
    "ContinuousState",
    "EventTrace",
    "next_event",
    "apply_event",
    "run_continuous",
    "potential_at",
]

ZENO_EVENTS = 10**5
ZENO_SPAN = 1e-12


class Termination(str, enum.Enum):
    DEATH = "Death"
    EVENT_CAP = "EventCap"
    TIME_CAP = "TimeCap"


@dataclass(frozen=True)
class ContinuousState:
    n: int
    abs_time: float
    U: tuple

    @classmethod
    def initial(cls, cfg: NetworkConfig):
        return cls(0, 0.0, cfg.initial_potentials)


@dataclass
class EventTrace:
    """Discharges of one run.

    ``events[k] = (time, fired)``; ``potentials[k]`` holds the potentials just
    after event ``k - 1`` (``potentials[0]`` is the initial vector), so
    ``len(potentials) == len(events) + 1``. ``end_time`` is how far the trace
    describes the process: ``inf`` after death.
    """

    events: list = field(default_factory=list)
    potentials: list = field(default_factory=list)
    death_index: int | None = None
    termination: Termination | None = None
    end_time: float = 0.0

    @property
    def times(self):
        return [t for t, _ in self.events]

    @property
    def death_time(self):
        """Time of the last discharge of a dead run (0 when it never fired)."""
        if self.termination is not Termination.DEATH:
            return None
        return self.events[-1][0] if self.events else 0.0


def _require_decay(cfg):
    for k, spec in enumerate(cfg.neurons):
        if spec.decay is None:
            raise DomainError(f"neuron {k} has no decay law; continuous time needs one")


def next_event(state: ContinuousState, cfg: NetworkConfig, rng: RngStream):
    """Sample one wait per neuron; returns ``(wait, fired, waits)``.

    ``fired`` is the full argmin set (empty when every wait is infinite).
    One uniform is consumed per neuron whatever its potential.
    """
    waits = [
        sample_wait_time(WaitTimeLaw(spec.phi, spec.decay, u), rng)
        for spec, u in zip(cfg.neurons, state.U)
    ]
    wait = min(waits)
    if math.isinf(wait):
        return wait, frozenset(), waits
    fired = frozenset(i for i, w in enumerate(waits) if w == wait)
    return wait, fired, waits


def apply_event(state: ContinuousState, cfg: NetworkConfig, wait: float, fired) -> ContinuousState:
    if not math.isfinite(wait):
        raise DomainError("apply_event needs a finite wait")
    n = cfg.size
    incoming = [0.0] * n
    for j in fired:
        for i, w in enumerate(cfg.weights[j]):
            incoming[i] += w
    U = tuple(
        0.0
        if i in fired
        else max(decay_value(cfg.neurons[i].decay, state.U[i], wait) + incoming[i], 0.0)
        for i in range(n)
    )
    return ContinuousState(state.n + 1, state.abs_time + wait, U)


def run_continuous(
    cfg: NetworkConfig,
    max_events: int,
    max_time: float,
    rng: RngStream,
) -> EventTrace:
    """Simulate until death, ``max_events`` discharges or time ``max_time``.

    ``max_time`` may be ``inf``. Raises ``ZenoError`` if ``ZENO_EVENTS``
    consecutive events advance the clock by less than ``ZENO_SPAN`` in total.
    """
    if max_events < 1 or not max_time > 0:
        raise ValueError("caps must be positive")
    _require_decay(cfg)
    state = ContinuousState.initial(cfg)
    trace = EventTrace(potentials=[state.U])
    window_start = 0.0
    while True:
        if state.n >= max_events:
            trace.termination = Termination.EVENT_CAP
            trace.end_time = state.abs_time
            return trace
        wait, fired, _ = next_event(state, cfg, rng)
        if math.isinf(wait):
            trace.death_index = state.n
            trace.termination = Termination.DEATH
            trace.end_time = math.inf
            return trace
        if state.abs_time + wait > max_time:
            trace.termination = Termination.TIME_CAP
            trace.end_time = max_time
            return trace
        state = apply_event(state, cfg, wait, fired)
        trace.events.append((state.abs_time, fired))
        trace.potentials.append(state.U)
        if state.n % ZENO_EVENTS == 0:
            if state.abs_time - window_start < ZENO_SPAN:
                raise ZenoError(
                    f"{ZENO_EVENTS} events advanced time by {state.abs_time - window_start:g}"
                )
            window_start = state.abs_time


def potential_at(trace: EventTrace, cfg: NetworkConfig, i: int, t: float) -> float:
    """Potential of neuron ``i`` at time ``t``, decayed from the last event at or before ``t``."""
    if t < 0 or t > trace.end_time:
        raise DomainError(f"t={t!r} outside the trace coverage [0, {trace.end_time}]")
    k = bisect.bisect_right(trace.times, t)
    start = trace.events[k - 1][0] if k else 0.0
    return decay_value(cfg.neurons[i].decay, trace.potentials[k][i], t - start)
