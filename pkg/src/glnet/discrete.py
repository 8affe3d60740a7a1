"""Discrete-time model without decay: step-by-step and event-skipping simulation.

At each step every neuron fires independently with probability
``phi_i(U(i))``; fired neurons reset to zero and the rest add the weights of
the neurons that fired, clamped at zero. The multi-step variant draws the
geometric time to each neuron's next discharge and jumps straight to the
earliest one; both produce the same law.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .model import NetworkConfig, eval_phi
from .rng import RngStream
from .samplers import sample_geometric

__all__ = [
    "DiscreteState",
    "StepRecord",
    "DeadState",
    "firing_probabilities",
    "single_step",
    "multi_step",
    "run_discrete",
]


class DeadState(Exception):
    """Every neuron has firing probability zero; nothing can happen again."""


@dataclass(frozen=True)
class DiscreteState:
    t: int
    U: tuple

    @classmethod
    def initial(cls, cfg: NetworkConfig):
        return cls(0, cfg.initial_potentials)


@dataclass(frozen=True)
class StepRecord:
    t: int
    fired: frozenset


def firing_probabilities(state: DiscreteState, cfg: NetworkConfig):
    """Bernoulli parameters ``phi_i(U(i))``, clamped to [0, 1] with a warning."""
    probs = []
    for k, (spec, u) in enumerate(zip(cfg.neurons, state.U)):
        p = eval_phi(spec.phi, u)
        if p > 1.0:
            warnings.warn(
                f"neuron {k}: phi({u}) = {p} exceeds 1 and is clamped to 1 in discrete time",
                RuntimeWarning,
                stacklevel=3,
            )
            p = 1.0
        probs.append(p)
    return probs


def _update(U, fired, cfg):
    n = len(U)
    incoming = [0.0] * n
    for j in fired:
        for i, w in enumerate(cfg.weights[j]):
            incoming[i] += w
    return tuple(
        0.0 if i in fired else max(U[i] + incoming[i], 0.0) for i in range(n)
    )


def single_step(state: DiscreteState, cfg: NetworkConfig, rng: RngStream):
    """Advance one time step; returns ``(new_state, record)``."""
    probs = firing_probabilities(state, cfg)
    fired = frozenset(i for i, p in enumerate(probs) if rng.uniform() < p)
    t = state.t + 1
    U = _update(state.U, fired, cfg) if fired else state.U
    return DiscreteState(t, U), StepRecord(t, fired)


def multi_step(state: DiscreteState, cfg: NetworkConfig, rng: RngStream):
    """Jump to the next step at which some neuron fires.

    Raises ``DeadState`` when all firing probabilities are zero.
    """
    probs = firing_probabilities(state, cfg)
    if not any(p > 0.0 for p in probs):
        raise DeadState(f"no neuron can fire at t={state.t}")
    waits = [sample_geometric(p, rng) for p in probs]
    wait = min(waits)
    fired = frozenset(i for i, w in enumerate(waits) if w == wait)
    t = state.t + wait
    return DiscreteState(t, _update(state.U, fired, cfg)), StepRecord(t, fired)


def _warn_decay(cfg):
    if any(spec.decay is not None for spec in cfg.neurons):
        warnings.warn(
            "the discrete model has no potential decay; decay laws are ignored",
            UserWarning,
            stacklevel=3,
        )


def run_discrete(
    cfg: NetworkConfig,
    horizon: int,
    mode: str,
    rng: RngStream,
    max_events: int | None = None,
):
    """Simulate from the initial potentials up to time ``horizon``.

    Returns ``(records, dead)``: the steps with at least one discharge (time
    ``<= horizon``) and whether the run stopped in a state where no neuron can
    fire. ``max_events`` optionally caps the number of recorded steps.
    """
    if mode not in ("single", "multi"):
        raise ValueError(f"mode must be 'single' or 'multi', got {mode!r}")
    _warn_decay(cfg)
    state = DiscreteState.initial(cfg)
    records = []
    with warnings.catch_warnings():
        warnings.simplefilter("once", RuntimeWarning)
        while state.t < horizon:
            if max_events is not None and len(records) >= max_events:
                return records, False
            if mode == "single":
                if not any(p > 0.0 for p in firing_probabilities(state, cfg)):
                    return records, True
                state, rec = single_step(state, cfg, rng)
                if rec.fired:
                    records.append(rec)
            else:
                try:
                    new_state, rec = multi_step(state, cfg, rng)
                except DeadState:
                    return records, True
                if new_state.t > horizon:
                    break
                state = new_state
                records.append(rec)
    return records, False


def first_event(cfg: NetworkConfig, mode: str, rng: RngStream, horizon=math.inf):
    """``(time, fired set)`` of the first discharge, or ``None`` past ``horizon``."""
    state = DiscreteState.initial(cfg)
    while state.t < horizon:
        if mode == "single":
            if not any(p > 0.0 for p in firing_probabilities(state, cfg)):
                return None
            state, rec = single_step(state, cfg, rng)
        else:
            try:
                state, rec = multi_step(state, cfg, rng)
            except DeadState:
                return None
        if rec.fired:
            return (rec.t, rec.fired) if rec.t <= horizon else None
    return None
