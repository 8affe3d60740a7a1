"""Experiment configuration, replica orchestration, statistics and output files."""
from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import math
import os
from dataclasses import dataclass, field

from .continuous import EventTrace, Termination, run_continuous
from .discrete import run_discrete
from .errors import ConfigError
from .hazard import WaitTimeLaw, cdf, defect_threshold
from .model import DecayLaw, NetworkConfig, NeuronSpec, PotentialFn, validate_config
from .rng import RngStream

__all__ = [
    "RunSettings",
    "ExperimentConfig",
    "RunSummary",
    "parse_config",
    "load_config",
    "run_replica",
    "run_replicas",
    "ks_statistic",
    "tv_distance",
    "write_outputs",
    "format_time",
]

MODES = ("discrete_single", "discrete_multi", "continuous")
SPIKES_HEADER = ("replica", "event_index", "time", "neuron")


@dataclass(frozen=True)
class RunSettings:
    mode: str = "continuous"
    max_events: int = 10_000
    max_time: float = math.inf
    replicas: int = 1
    seed: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    network: NetworkConfig
    run: RunSettings


@dataclass
class RunSummary:
    death_fraction: float
    mean_events: float
    mean_death_time: float | None
    terminations: list = field(default_factory=list)

    def to_dict(self):
        return {
            "death_fraction": self.death_fraction,
            "mean_events": self.mean_events,
            "mean_death_time": self.mean_death_time,
            "terminations": list(self.terminations),
        }


# -- config parsing ---------------------------------------------------------

def _get(obj, key, path, kind=None, default=...):
    if not isinstance(obj, dict):
        raise ConfigError(f"expected an object, got {type(obj).__name__}", path)
    full = f"{path}.{key}" if path else key
    if key not in obj:
        if default is ...:
            raise ConfigError("missing required key", full)
        return default
    value = obj[key]
    if kind is not None and not _is_kind(value, kind):
        raise ConfigError(f"expected {kind}, got {value!r}", full)
    return value


def _is_kind(value, kind):
    if kind == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == "string":
        return isinstance(value, str)
    if kind == "array":
        return isinstance(value, list)
    if kind == "object":
        return isinstance(value, dict)
    raise AssertionError(kind)


def _rekey(err: ConfigError, prefix):
    msg = str(err)
    if err.key:
        msg = msg[len(err.key) + 2:]
        return ConfigError(msg, f"{prefix}.{err.key}")
    return ConfigError(msg, prefix)


def _parse_neuron(raw, k):
    path = f"neurons[{k}]"
    nid = _get(raw, "id", path, "integer", k)
    phi_raw = _get(raw, "phi", path, "object")
    family = _get(phi_raw, "family", f"{path}.phi", "string")
    beta = _get(phi_raw, "beta", f"{path}.phi", "number", 1.0)
    r = _get(phi_raw, "r", f"{path}.phi", "integer", 1)
    try:
        phi = PotentialFn(family, beta, r)
    except ConfigError as err:
        raise _rekey(err, path) from None
    decay = None
    decay_raw = _get(raw, "decay", path, "object", None)
    if decay_raw is not None:
        kind = _get(decay_raw, "kind", f"{path}.decay", "string", "power")
        gamma = _get(decay_raw, "gamma", f"{path}.decay", "number", 1.0)
        mu = _get(decay_raw, "mu", f"{path}.decay", "number", 1.0)
        try:
            decay = DecayLaw(gamma, mu, kind)
        except ConfigError as err:
            raise _rekey(err, path) from None
    a = _get(raw, "initial_potential", path, "number")
    if not math.isfinite(a) or a < 0:
        raise ConfigError(f"must be finite and >= 0, got {a!r}", f"{path}.initial_potential")
    return nid, NeuronSpec(phi, decay, float(a))


def _parse_time(value, path):
    if value in ("inf", "Infinity"):
        return math.inf
    if not _is_kind(value, "number"):
        raise ConfigError(f"expected a number or \"inf\", got {value!r}", path)
    return float(value)


def parse_config(doc) -> ExperimentConfig:
    """Build an ``ExperimentConfig`` from the decoded JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object")
    raw_neurons = _get(doc, "neurons", "", "array")
    if not raw_neurons:
        raise ConfigError("at least one neuron is required", "neurons")
    parsed = [_parse_neuron(raw, k) for k, raw in enumerate(raw_neurons)]
    ids = sorted(nid for nid, _ in parsed)
    if ids != list(range(len(parsed))):
        raise ConfigError(f"ids must be 0..{len(parsed) - 1} without repeats, got {ids}", "neurons")
    neurons = [spec for _, spec in sorted(parsed, key=lambda p: p[0])]

    weights = _get(doc, "weights", "", "array")
    n = len(neurons)
    if len(weights) != n:
        raise ConfigError(f"expected {n} rows, got {len(weights)}", "weights")
    for i, row in enumerate(weights):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigError(f"expected a row of {n} numbers", f"weights[{i}]")
        for j, w in enumerate(row):
            if not _is_kind(w, "number") or not math.isfinite(w):
                raise ConfigError(f"expected a finite number, got {w!r}", f"weights[{i}][{j}]")
    network = NetworkConfig(neurons, weights)
    validate_config(network)

    run_raw = _get(doc, "run", "", "object", {})
    mode = _get(run_raw, "mode", "run", "string", "continuous")
    if mode not in MODES:
        raise ConfigError(f"must be one of {list(MODES)}, got {mode!r}", "run.mode")
    max_events = _get(run_raw, "max_events", "run", "integer", RunSettings.max_events)
    max_time = _parse_time(_get(run_raw, "max_time", "run", None, "inf"), "run.max_time")
    replicas = _get(run_raw, "replicas", "run", "integer", 1)
    seed = _get(run_raw, "seed", "run", "integer", 0)
    if max_events < 1:
        raise ConfigError(f"must be >= 1, got {max_events}", "run.max_events")
    if not max_time > 0:
        raise ConfigError(f"must be > 0, got {max_time}", "run.max_time")
    if mode != "continuous" and math.isinf(max_time):
        raise ConfigError("discrete modes need a finite horizon", "run.max_time")
    if replicas < 1:
        raise ConfigError(f"must be >= 1, got {replicas}", "run.replicas")
    if seed < 0:
        raise ConfigError(f"must be >= 0, got {seed}", "run.seed")
    if mode == "continuous":
        for k, spec in enumerate(neurons):
            if spec.decay is None:
                raise ConfigError("continuous mode needs a decay law", f"neurons[{k}].decay")
    return ExperimentConfig(network, RunSettings(mode, max_events, max_time, replicas, seed))


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(f"invalid JSON in {path}: {err}") from None
    return parse_config(doc)


# -- running ----------------------------------------------------------------

def run_replica(cfg: ExperimentConfig, replica: int) -> EventTrace:
    """One run on stream ``(seed, replica)``; discrete runs are returned as traces too."""
    run = cfg.run
    rng = RngStream(run.seed, replica)
    if run.mode == "continuous":
        return run_continuous(cfg.network, run.max_events, run.max_time, rng)
    horizon = int(math.floor(run.max_time))
    records, dead = run_discrete(
        cfg.network, horizon, run.mode.split("_")[1], rng, max_events=run.max_events
    )
    trace = EventTrace(events=[(float(r.t), r.fired) for r in records])
    if dead:
        trace.termination = Termination.DEATH
        trace.death_index = len(records)
        trace.end_time = math.inf
    elif len(records) >= run.max_events:
        trace.termination = Termination.EVENT_CAP
        trace.end_time = trace.events[-1][0]
    else:
        trace.termination = Termination.TIME_CAP
        trace.end_time = float(horizon)
    return trace


def _run_one(args):
    cfg, replica = args
    return run_replica(cfg, replica)


def summarize(traces) -> RunSummary:
    n = len(traces)
    deaths = [tr for tr in traces if tr.termination is Termination.DEATH]
    death_times = [tr.death_time for tr in deaths]
    return RunSummary(
        death_fraction=len(deaths) / n,
        mean_events=sum(len(tr.events) for tr in traces) / n,
        mean_death_time=(sum(death_times) / len(death_times)) if death_times else None,
        terminations=[tr.termination.value for tr in traces],
    )


def run_replicas(cfg: ExperimentConfig, jobs: int = 1):
    """Run every replica (stream id = replica index) and aggregate.

    With ``jobs > 1`` replicas run in worker processes; results are
    collected in replica order so the output does not depend on ``jobs``.
    """
    work = [(cfg, k) for k in range(cfg.run.replicas)]
    if jobs > 1 and len(work) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(_run_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        traces = [_run_one(w) for w in work]
    return summarize(traces), traces


# -- statistics -------------------------------------------------------------

def ks_statistic(samples, law: WaitTimeLaw) -> float:
    """Kolmogorov-Smirnov distance between finite draws and the law conditioned on finiteness."""
    xs = sorted(float(x) for x in samples if math.isfinite(x))
    if not xs:
        raise ValueError("ks_statistic needs at least one finite sample")
    limit = defect_threshold(law)
    n = len(xs)
    d = 0.0
    for k, x in enumerate(xs):
        f = cdf(law, x) / limit
        d = max(d, (k + 1) / n - f, f - k / n)
    return d


def tv_distance(p: dict, q: dict) -> float:
    """Total variation distance between two distributions given as outcome -> mass."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


# -- outputs ----------------------------------------------------------------

def format_time(t: float) -> str:
    return format(t, "#.16g")


def spikes_csv(traces) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SPIKES_HEADER)
    for replica, trace in enumerate(traces):
        for index, (t, fired) in enumerate(trace.events):
            for neuron in sorted(fired):
                writer.writerow((replica, index, format_time(t), neuron))
    return buf.getvalue()


def summary_json(summary: RunSummary, run: RunSettings | None = None) -> str:
    doc = summary.to_dict()
    if run is not None:
        doc["run"] = {
            "mode": run.mode,
            "max_events": run.max_events,
            "max_time": run.max_time if math.isfinite(run.max_time) else "inf",
            "replicas": run.replicas,
            "seed": run.seed,
        }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_outputs(traces, summary: RunSummary, out_dir, run: RunSettings | None = None):
    """Write ``spikes.csv`` and ``summary.json`` into ``out_dir``; returns their paths."""
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as err:
        raise OSError(f"cannot create output directory {out_dir}: {err}") from err
    paths = {
        "spikes": os.path.join(out_dir, "spikes.csv"),
        "summary": os.path.join(out_dir, "summary.json"),
    }
    contents = {"spikes": spikes_csv(traces), "summary": summary_json(summary, run)}
    for key, path in paths.items():
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(contents[key])
        except OSError as err:
            raise OSError(f"cannot write {path}: {err}") from err
    return paths
