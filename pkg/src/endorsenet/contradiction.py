"""Rational and intuitive contradiction detection over a completed evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .evaluation import endorsement_strength, relative_certainty
from .model import Network
from .state import EvaluationState

DEFAULT_TAU = 0.5


@dataclass(frozen=True)
class RationalContradiction:
    """Compelling endorsements both for and against ``node``."""

    node: str
    pro: tuple[str, ...]
    con: tuple[str, ...]
    max_pro: float
    min_con: float


@dataclass(frozen=True)
class IntuitiveContradiction:
    node: str
    intuition: float
    rational: float
    threshold: float

    @property
    def divergence(self) -> float:
        return abs(self.intuition - self.rational)


@dataclass
class ContradictionReport:
    rational: list[RationalContradiction] = field(default_factory=list)
    intuitive: list[IntuitiveContradiction] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.rational and not self.intuitive

    def nodes(self) -> set[str]:
        return {c.node for c in self.rational} | {c.node for c in self.intuitive}


def rational_for(node: str, state: EvaluationState, network: Network, tau: float = DEFAULT_TAU):
    """The rational contradiction at ``node``, or None.

    Endorsers of zero certainty are not evidence and never count.
    """
    edges = network.incoming(node)
    if not edges:
        return None
    values = [state.value(e.src) for e in edges]
    rcs = relative_certainty([v.certainty for v in values])
    pro: list[tuple[str, float]] = []
    con: list[tuple[str, float]] = []
    for e, v, rc in zip(edges, values, rcs):
        if rc <= 0.0:
            continue
        strength = endorsement_strength(v.belief, state.effective_support.get(e.key, e.base_strength))
        if strength >= tau:
            pro.append((e.src, strength))
        elif strength <= -tau:
            con.append((e.src, strength))
    if not (pro and con):
        return None
    return RationalContradiction(
        node,
        tuple(n for n, _ in pro),
        tuple(n for n, _ in con),
        max(s for _, s in pro),
        min(s for _, s in con),
    )


def find_rational(state: EvaluationState, network: Network, tau: float = DEFAULT_TAU) -> list[RationalContradiction]:
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    found = (rational_for(n, state, network, tau) for n in sorted(network.nodes))
    return [c for c in found if c is not None]


def find_intuitive(state: EvaluationState, network: Network) -> list[IntuitiveContradiction]:
    """Nodes whose intuition and computed belief differ by strictly more than the node's threshold."""
    out = []
    for node_id in sorted(network.nodes):
        node = network.nodes[node_id]
        if node.intuition is None or not network.incoming(node_id):
            continue
        rational = state.value(node_id).belief
        if abs(node.intuition.belief - rational) > node.threshold:
            out.append(IntuitiveContradiction(node_id, node.intuition.belief, rational, node.threshold))
    return out


def find_contradictions(state: EvaluationState, network: Network, tau: float = DEFAULT_TAU) -> ContradictionReport:
    return ContradictionReport(find_rational(state, network, tau), find_intuitive(state, network))
