"""Static decision of whether the network eventually stops firing.

Neurons split into S (finite total hazard from any start, so each waiting
period has a positive chance of lasting forever) and R (they fire again
almost surely once their potential is positive). With non-negative weights
and positive starting potentials, the system dies almost surely exactly when
the positive-influence digraph restricted to R has no directed cycle;
otherwise it never dies almost surely.
"""
from __future__ import annotations

import collections
import enum
from dataclasses import dataclass, field

from .model import DecayLaw, Family, NetworkConfig, PotentialFn, validate_config

__all__ = [
    "NeuronClass",
    "InfluenceDigraph",
    "Conclusion",
    "DeathVerdict",
    "zero_order",
    "classify_neuron",
    "influence_digraph",
    "topological_order",
    "is_dag",
    "death_verdict",
]


def zero_order(phi: PotentialFn) -> int:
    """Order ``d`` of the zero of phi at the origin (``phi(u) ~ c u**d``)."""
    if phi.family is Family.EXPONENTIAL:
        return 1
    return phi.r


@dataclass(frozen=True)
class NeuronClass:
    cls: str  # "S" or "R"
    zero_order: int


def classify_neuron(phi: PotentialFn, decay: DecayLaw) -> NeuronClass:
    """S iff ``int_0 phi(v) / v**gamma dv`` converges, i.e. ``d > gamma - 1``.

    The answer does not depend on the starting potential, so none is taken.
    """
    d = zero_order(phi)
    if not decay.is_power:
        # starts at or above 1 never decay to zero, so phi(V) stays bounded below
        return NeuronClass("R", d)
    return NeuronClass("S" if d > decay.gamma - 1.0 else "R", d)


@dataclass(frozen=True)
class InfluenceDigraph:
    vertices: tuple
    arcs: frozenset

    def successors(self):
        succ = {v: [] for v in self.vertices}
        for i, j in sorted(self.arcs):
            succ[i].append(j)
        return succ


def influence_digraph(cfg: NetworkConfig, vertices=None) -> InfluenceDigraph:
    """Arcs ``i -> j`` for ``i != j`` with ``W[i][j] > 0``, restricted to ``vertices``."""
    if vertices is None:
        vertices = range(cfg.size)
    keep = tuple(sorted(vertices))
    arcs = frozenset(
        (i, j)
        for i in keep
        for j in keep
        if i != j and cfg.weights[i][j] > 0
    )
    return InfluenceDigraph(keep, arcs)


def topological_order(vertices, arcs):
    """Kahn's algorithm: repeatedly remove a vertex of indegree zero.

    Returns the order, or None when a directed cycle blocks it.
    """
    vertices = list(vertices)
    indegree = {v: 0 for v in vertices}
    succ = {v: [] for v in vertices}
    for i, j in sorted(arcs):
        succ[i].append(j)
        indegree[j] += 1
    ready = collections.deque(v for v in vertices if indegree[v] == 0)
    order = []
    while ready:
        v = ready.popleft()
        order.append(v)
        for w in succ[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                ready.append(w)
    if len(order) != len(vertices):
        return None
    return order


def is_dag(graph: InfluenceDigraph) -> bool:
    return topological_order(graph.vertices, graph.arcs) is not None


class Conclusion(str, enum.Enum):
    DIES_ALMOST_SURELY = "DiesAlmostSurely"
    NEVER_DIES_AS = "NeverDiesAS"
    INAPPLICABLE = "Inapplicable"


@dataclass
class DeathVerdict:
    classes: dict
    graph: InfluenceDigraph  # D restricted to R
    full_graph: InfluenceDigraph
    dag: bool
    conclusion: Conclusion
    hypotheses_ok: bool
    violations: list = field(default_factory=list)
    order: list | None = None

    def to_dict(self):
        return {
            "classes": {
                str(k): {"class": c.cls, "zero_order": c.zero_order}
                for k, c in sorted(self.classes.items())
            },
            "arcs": [list(a) for a in sorted(self.full_graph.arcs)],
            "recurrent": list(self.graph.vertices),
            "recurrent_arcs": [list(a) for a in sorted(self.graph.arcs)],
            "order": self.order,
            "dag": self.dag,
            "conclusion": self.conclusion.value,
            "hypotheses_ok": self.hypotheses_ok,
            "violations": list(self.violations),
        }


def death_verdict(cfg: NetworkConfig) -> DeathVerdict:
    """Classify every neuron, test ``D[R]`` for cycles and state the conclusion.

    When a hypothesis of the criterion fails the conclusion is
    ``Inapplicable``; the classification and DAG test are still reported.
    """
    report = validate_config(cfg)
    violations = list(report.violations)
    hypotheses_ok = report.hypotheses_ok and report.axioms_ok
    classes = {}
    for k, spec in enumerate(cfg.neurons):
        if spec.decay is None:
            hypotheses_ok = False
            violations.append(f"neuron {k}: no decay law")
            continue
        classes[k] = classify_neuron(spec.phi, spec.decay)
    recurrent = [k for k, c in classes.items() if c.cls == "R"]
    graph = influence_digraph(cfg, recurrent)
    order = topological_order(graph.vertices, graph.arcs)
    dag = order is not None
    if not hypotheses_ok:
        conclusion = Conclusion.INAPPLICABLE
    elif dag:
        conclusion = Conclusion.DIES_ALMOST_SURELY
    else:
        conclusion = Conclusion.NEVER_DIES_AS
    return DeathVerdict(
        classes, graph, influence_digraph(cfg), dag, conclusion, hypotheses_ok, violations, order
    )
