"""Exact simulation of a continuous-time stochastic spiking network with potential decay.

Potentials decay deterministically between discharges; each neuron's next
discharge is drawn by inverse transform from a wait-time law that may put
positive mass at infinity. The package also contains the discrete-time model
with its step-by-step and event-skipping simulators, and a static test of
whether the network stops firing almost surely.
"""
from .continuous import EventTrace, Termination, run_continuous
from .death import Conclusion, classify_neuron, death_verdict
from .discrete import run_discrete
from .errors import ConfigError, DomainError, NumericError, ZenoError
from .hazard import WaitTimeLaw, atom, cdf, cumulative_hazard, defect_threshold, total_hazard
from .model import DecayLaw, NetworkConfig, NeuronSpec, PotentialFn, validate_config
from .rng import RngStream
from .samplers import inverse_cdf, sample_geometric, sample_wait_time

__version__ = "0.1.0"
