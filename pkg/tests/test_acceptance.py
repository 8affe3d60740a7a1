"""Acceptance criteria, one test group per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""
import json
import math
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from glnet.continuous import Termination, run_continuous
from glnet.death import Conclusion, InfluenceDigraph, death_verdict, is_dag
from glnet.discrete import first_event
from glnet.experiments import ks_statistic, tv_distance
from glnet.hazard import (
    CLOSED_FORM_BRANCHES,
    WaitTimeLaw,
    atom,
    cdf,
    closed_form_branch,
    cumulative_hazard,
    cumulative_hazard_numeric,
    defect_threshold,
)
from glnet.model import DecayLaw, NetworkConfig, NeuronSpec, PotentialFn, decay_value
from glnet.rng import RngStream
from glnet.samplers import inverse_cdf, sample_wait_time

from oracles import binomial_sigma, first_event_law, has_cycle_bruteforce

M, R = PotentialFn.monomial, PotentialFn.rational

BRANCHES = {
    "rational/gamma=1": (R(2, 1.5), DecayLaw(1, 0.8)),
    "monomial/gamma=1": (M(1, 1.0), DecayLaw(1, 1.0)),
    "rational1/gamma=2": (R(1, 0.7), DecayLaw(2, 1.2)),
    "rational2/gamma=2": (R(2, 1.0), DecayLaw(2, 1.0)),
    "monomial1/gamma=2": (M(1, 2.0), DecayLaw(2, 0.6)),
    "monomial_r>=2/gamma=2": (M(2, 1.0), DecayLaw(2, 1.0)),
}


def criterion(number, title):
    return pytest.mark.criterion(number, title)


def network(specs, weights):
    return NetworkConfig([NeuronSpec(p, d, float(a)) for p, d, a in specs], weights)


# -- 1 ----------------------------------------------------------------------

_C1_SECONDS = []


@criterion(1, "closed-form hazard vs quadrature <= 1e-6 on a 100-point grid, < 10 s")
@pytest.mark.parametrize("branch", CLOSED_FORM_BRANCHES)
def test_c1_closed_vs_quadrature(branch, measured):
    phi, decay = BRANCHES[branch]
    start = time.perf_counter()
    worst = 0.0
    for u0 in np.geomspace(0.05, 50.0, 10):
        law = WaitTimeLaw(phi, decay, float(u0))
        assert closed_form_branch(law) == branch
        for t in np.geomspace(0.01, 50.0, 10):
            worst = max(worst, abs(cumulative_hazard(law, t) - cumulative_hazard_numeric(law, t)))
    _C1_SECONDS.append(time.perf_counter() - start)
    measured(f"{branch} max err {worst:.1e}")
    assert worst <= 1e-6
    assert sum(_C1_SECONDS) < 10.0


# -- 2 ----------------------------------------------------------------------

@criterion(2, "inverse round trip |F(G(xi)) - xi| <= 1e-9 below the threshold, < 1 s")
def test_c2_round_trip(measured):
    start = time.perf_counter()
    worst, count = 0.0, 0
    for phi, decay in BRANCHES.values():
        for u0 in (0.3, 1.0, 4.0):
            law = WaitTimeLaw(phi, decay, u0)
            L = defect_threshold(law)
            grid = [k / 100 for k in range(1, 100)]
            for xi in [x for x in grid if x < L] + [L * x for x in grid]:
                t = inverse_cdf(law, xi)
                assert math.isfinite(t)
                worst = max(worst, abs(cdf(law, t) - xi))
                count += 1
    secs = time.perf_counter() - start
    measured(f"{count} points, max err {worst:.1e}, {secs:.2f}s")
    assert worst <= 1e-9
    assert secs < 1.0


# -- 3 ----------------------------------------------------------------------

KS_LAWS = {
    "gamma=1 rational r=1": (R(1, 1.0), DecayLaw(1, 1)),
    "gamma=1 monomial r=1": (M(1, 1.0), DecayLaw(1, 1)),
    "gamma=2 rational r=1": (R(1, 1.0), DecayLaw(2, 1)),
    "gamma=2 rational r=2": (R(2, 1.0), DecayLaw(2, 1)),
    "gamma=2 monomial r=1": (M(1, 1.0), DecayLaw(2, 1)),
}
_C3_SECONDS = []


@criterion(3, "sampler KS <= 0.01 at 1e5 draws for five laws, < 30 s")
@pytest.mark.parametrize("name", list(KS_LAWS))
def test_c3_sampler_ks(name, measured):
    phi, decay = KS_LAWS[name]
    law = WaitTimeLaw(phi, decay, 1.0)
    rng = RngStream(20240, list(KS_LAWS).index(name))
    start = time.perf_counter()
    draws = [sample_wait_time(law, rng) for _ in range(100_000)]
    finite = [x for x in draws if math.isfinite(x)]
    d = ks_statistic(finite, law)
    _C3_SECONDS.append(time.perf_counter() - start)
    measured(f"{name} KS {d:.4f} on {len(finite)} finite")
    assert d <= 0.01
    assert sum(_C3_SECONDS) < 30.0


# -- 4 ----------------------------------------------------------------------

@criterion(4, "atom frequency within 3 sigma of exp(-Lambda(inf)), 1e4 draws")
@pytest.mark.parametrize(
    "phi, decay, expected",
    [(M(1, 1.0), DecayLaw(1, 1), math.exp(-1)), (R(2, 1.0), DecayLaw(2, 1), math.exp(-math.pi / 4))],
    ids=["monomial-gamma1", "rational2-gamma2"],
)
def test_c4_atom(phi, decay, expected, measured):
    law = WaitTimeLaw(phi, decay, 1.0)
    assert atom(law) == pytest.approx(expected, abs=1e-12)
    rng = RngStream(404)
    n = 10_000
    frac = sum(math.isinf(sample_wait_time(law, rng)) for _ in range(n)) / n
    sigma = binomial_sigma(expected, n)
    measured(f"{frac:.4f} vs {expected:.4f} ({abs(frac - expected) / sigma:.2f} sigma)")
    assert abs(frac - expected) <= 3 * sigma


# -- 5 ----------------------------------------------------------------------

@criterion(5, "single-step and multi-step first-event laws within 0.02 TV of each other and the product formula")
def test_c5_discrete_equivalence(measured):
    cfg = network([(M(1, 0.5), None, 1.0)] * 2, [[0, 0], [0, 0]])
    n, horizon = 100_000, 5
    exact = first_event_law((0.5, 0.5), horizon)
    empirical = {}
    for mode, stream in (("single", 0), ("multi", 1)):
        rng = RngStream(55, stream)
        counts = {}
        for _ in range(n):
            key = first_event(cfg, mode, rng, horizon)
            counts[key] = counts.get(key, 0) + 1
        empirical[mode] = {k: c / n for k, c in counts.items()}
    between = tv_distance(empirical["single"], empirical["multi"])
    to_single = tv_distance(empirical["single"], exact)
    to_multi = tv_distance(empirical["multi"], exact)
    measured(f"TV single/multi {between:.4f}, vs formula {to_single:.4f} / {to_multi:.4f}")
    assert between <= 0.02
    assert to_single <= 0.02
    assert to_multi <= 0.02


# -- 6 ----------------------------------------------------------------------

@criterion(6, "large-potential limits at V0 = 1e6")
def test_c6_limits(measured):
    law = WaitTimeLaw(R(1, 1.0), DecayLaw(1, 1), 1e6)
    worst = max(abs(inverse_cdf(law, k / 10) + math.log1p(-k / 10)) for k in range(1, 10))
    assert worst <= 1e-3
    gaps = []
    for beta, mu in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)]:
        floor = math.exp(-math.pi / (2 * math.sqrt(beta) * mu))
        gaps.append(abs(atom(WaitTimeLaw(R(2, beta), DecayLaw(2, mu), 1e6)) - floor))
    measured(f"exp(1) quantile gap {worst:.1e}, atom gap {max(gaps):.1e}")
    assert max(gaps) <= 1e-3


# -- 7 ----------------------------------------------------------------------

_C7_SECONDS = []


def _terminations(cfg, runs, max_events, seed):
    start = time.perf_counter()
    out = [run_continuous(cfg, max_events, math.inf, RngStream(seed, k)).termination for k in range(runs)]
    _C7_SECONDS.append(time.perf_counter() - start)
    return out


@criterion(7, "death criterion Monte Carlo (a) all-S (b) R-cycle (c) R-chain, < 2 min")
def test_c7a_all_s_dies(measured):
    cfg = network([(M(1, 1.0), DecayLaw(1, 1), 1.0)] * 2, [[0, 1], [1, 0]])
    assert death_verdict(cfg).conclusion is Conclusion.DIES_ALMOST_SURELY
    ends = _terminations(cfg, 1000, 10**5, 71)
    deaths = ends.count(Termination.DEATH)
    measured(f"(a) {deaths}/1000 Death")
    assert deaths == 1000


@criterion(7, "death criterion Monte Carlo (a) all-S (b) R-cycle (c) R-chain, < 2 min")
def test_c7b_recurrent_cycle_lives(measured):
    cfg = network([(M(1, 1.0), DecayLaw(2, 1), 1.0)] * 2, [[0, 1], [1, 0]])
    assert death_verdict(cfg).conclusion is Conclusion.NEVER_DIES_AS
    ends = _terminations(cfg, 100, 10**4, 72)
    deaths = ends.count(Termination.DEATH)
    measured(f"(b) {deaths}/100 Death")
    assert deaths == 0
    assert all(e is Termination.EVENT_CAP for e in ends)


@criterion(7, "death criterion Monte Carlo (a) all-S (b) R-cycle (c) R-chain, < 2 min")
def test_c7c_recurrent_chain_dies(measured):
    cfg = network([(M(1, 1.0), DecayLaw(2, 1), 1.0)] * 3, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert death_verdict(cfg).conclusion is Conclusion.DIES_ALMOST_SURELY
    ends = _terminations(cfg, 100, 10**5, 73)
    deaths = ends.count(Termination.DEATH)
    measured(f"(c) {deaths}/100 Death, {sum(_C7_SECONDS):.1f}s total")
    assert deaths >= 99
    assert sum(_C7_SECONDS) < 120.0


# -- 8 ----------------------------------------------------------------------

DECAYS = [DecayLaw(1, 1), DecayLaw(1, 0.3), DecayLaw(2, 1), DecayLaw(2, 2.5), DecayLaw(1.5, 0.8), DecayLaw(3.7, 1.2)]


@criterion(8, "decay axioms on 1e4 random triples at 1e-9; DAG check vs brute force on 1e3 graphs")
@pytest.mark.parametrize("decay", DECAYS, ids=lambda d: f"gamma={d.gamma},mu={d.mu}")
def test_c8_decay_axioms(decay, measured):
    rng = random.Random(f"{decay.gamma}/{decay.mu}")
    worst = 0.0
    for _ in range(10_000):
        u = rng.uniform(0.0, 100.0)
        s, t = rng.uniform(0.0, 50.0), rng.uniform(0.0, 50.0)
        v = rng.uniform(0.0, 100.0)
        assert decay_value(decay, u, 0.0) == u
        both = decay_value(decay, u, s + t)
        step = decay_value(decay, decay_value(decay, u, s), t)
        err = abs(both - step) / max(1.0, u)
        worst = max(worst, err)
        assert err <= 1e-9
        lo, hi = sorted((u, v))
        assert decay_value(decay, lo, t) <= decay_value(decay, hi, t) + 1e-9 * max(1.0, hi)
        a, b = sorted((s, t))
        assert decay_value(decay, u, b) <= decay_value(decay, u, a) + 1e-9 * max(1.0, u)
        assert decay_value(decay, u, t) >= 0.0
    measured(f"gamma={decay.gamma} semigroup {worst:.1e}")


@criterion(8, "decay axioms on 1e4 random triples at 1e-9; DAG check vs brute force on 1e3 graphs")
def test_c8_dag_vs_bruteforce(measured):
    rng = random.Random(8)
    cyclic = 0
    for _ in range(1000):
        n = rng.randint(1, 6)
        p = rng.uniform(0.05, 0.6)
        arcs = {(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p}
        has_cycle = has_cycle_bruteforce(n, arcs)
        cyclic += has_cycle
        assert is_dag(InfluenceDigraph(tuple(range(n)), frozenset(arcs))) == (not has_cycle)
    measured(f"{cyclic}/1000 cyclic graphs")
    assert 0 < cyclic < 1000


# -- 9 ----------------------------------------------------------------------

@criterion(9, "simulate twice with the same config and seed gives identical bytes")
def test_c9_cli_determinism(tmp_path, measured):
    neuron = lambda k, gamma: {
        "id": k,
        "phi": {"family": "rational", "r": 2, "beta": 1.0},
        "decay": {"gamma": gamma, "mu": 1.0},
        "initial_potential": 1.0 + k,
    }
    doc = {
        "neurons": [neuron(0, 1), neuron(1, 2), neuron(2, 1.5)],
        "weights": [[0, 1.0, 0.5], [0.5, 0, 1.0], [1.0, 0.2, 0]],
        "run": {"mode": "continuous", "max_events": 200, "max_time": 500.0, "replicas": 8, "seed": 3},
    }
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(doc))
    outputs = []
    for run in ("first", "second"):
        out = tmp_path / run
        subprocess.run(
            [sys.executable, "-m", "glnet", "simulate", "--config", str(cfg), "--seed", "9", "--out", str(out)],
            check=True,
            capture_output=True,
        )
        outputs.append({name: (out / name).read_bytes() for name in ("spikes.csv", "summary.json")})
    rows = outputs[0]["spikes.csv"].count(b"\n") - 1
    measured(f"{rows} spike rows identical")
    assert rows > 0
    assert outputs[0] == outputs[1]
