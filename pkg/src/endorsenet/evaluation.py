"""Belief and certainty of a single node from its endorsements.

Each endorser k of node j contributes its belief b_k, certainty c_k and the
effective support s_kj of the edge k -> j.  The combination is

    rc_k  = c_k / max(c)                         relative certainty
    r_kj  = s_kj / sum(|s_hj|)                   relative importance
    b_j   = sum(rc_k * r_kj * b_k)
    c_j   = 1 - sum(|b~_k - b_j| * |r_kj| * rc_k)   clamped to [0, 1]

with b~_k = b_k * sign(s_kj).  Endorsers with rc_k == 0 are left out of the
active set entirely, so an endorser of zero certainty cannot dilute the
others.  A node whose active set is empty (or whose active supports are all
zero) falls back to its intuition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import Undefined
from .exclusivity import apply_exclusion
from .model import Edge, MetaEndorsement, Network, Rationale, SupportEdge
from .state import EvaluationState

# value assigned to a node that has endorsements but no usable evidence and no intuition
NO_EVIDENCE = Rationale(0.0, 0.0)


@dataclass(frozen=True)
class EndorserView:
    endorser: str
    belief: float
    certainty: float
    support: float


def endorsement_strength(belief: float, support: float) -> float:
    return belief * support


def relative_certainty(certainties: Sequence[float]) -> list[float]:
    top = max(certainties, default=0.0)
    if top <= 0.0:
        return [0.0] * len(certainties)
    return [c / top for c in certainties]


def _active(endorsers: Sequence[EndorserView]) -> list[tuple[EndorserView, float]]:
    rcs = relative_certainty([e.certainty for e in endorsers])
    return [(e, rc) for e, rc in zip(endorsers, rcs) if rc > 0.0]


def relative_importance(endorsers: Sequence[EndorserView]) -> dict[str, float]:
    """Signed share of total absolute support, over the active endorsers only."""
    active = _active(endorsers)
    total = math.fsum(abs(e.support) for e, _ in active)
    if total == 0.0:
        return {e.endorser: 0.0 for e, _ in active}
    return {e.endorser: e.support / total for e, _ in active}


def _fallback(fallback: Optional[Rationale], target: str) -> Rationale:
    if fallback is None:
        raise Undefined(target, "no active endorsements and no intuition")
    return fallback


def _weighted(triples: Sequence[tuple[float, float, float]]):
    """Active (belief, rc, support) triples and their total |support|.

    ``triples`` are (belief, certainty, support) per endorser.
    """
    top = 0.0
    for _, c, _ in triples:
        if c > top:
            top = c
    if top <= 0.0:
        return [], 0.0
    active = [(b, c / top, s) for b, c, s in triples if c > 0.0]
    return active, math.fsum([abs(s) for _, _, s in active])


def _belief(active, total: float, target: str) -> float:
    # one division at the end keeps |b_j| <= 1 exact in floating point
    belief = math.fsum([rc * s * b for b, rc, s in active]) / total
    assert -1.0 <= belief <= 1.0, (target, belief)
    return belief


def _certainty(belief: float, active, total: float) -> float:
    terms = []
    for b, rc, s in active:
        # direction-adjusted endorser belief b * sign(s)
        directed = b if s > 0.0 else -b if s < 0.0 else 0.0
        terms.append(abs(directed - belief) * (abs(s) / total) * rc)
    # exactly rounded, so endorser order never shows up in the last bit
    return min(1.0, max(0.0, 1.0 - math.fsum(terms)))


def combine(
    triples: Sequence[tuple[float, float, float]],
    fallback: Optional[Rationale] = None,
    target: str = "?",
) -> tuple[Rationale, bool]:
    """Rationale from (belief, certainty, support) per endorser; flag is True on fallback."""
    active, total = _weighted(triples)
    if total == 0.0:
        return _fallback(fallback, target), True
    b = _belief(active, total, target)
    return Rationale(b, _certainty(b, active, total)), False


def _triples(endorsers: Sequence[EndorserView]):
    return [(e.belief, e.certainty, e.support) for e in endorsers]


def compute_belief(
    endorsers: Sequence[EndorserView],
    fallback: Optional[Rationale] = None,
    target: str = "?",
) -> float:
    active, total = _weighted(_triples(endorsers))
    if total == 0.0:
        return _fallback(fallback, target).belief
    return _belief(active, total, target)


def compute_certainty(
    belief: float,
    endorsers: Sequence[EndorserView],
    fallback: Optional[Rationale] = None,
    target: str = "?",
) -> float:
    active, total = _weighted(_triples(endorsers))
    if total == 0.0:
        return _fallback(fallback, target).certainty
    return _certainty(belief, active, total)


def _meta_adjusted(base: float, metas: Sequence[MetaEndorsement], state: EvaluationState) -> float:
    values = [state.value(m.endorser) for m in metas]
    top = max(v.certainty for v in values)
    if top <= 0.0:
        return base
    shift = math.fsum(v.belief * (v.certainty / top) * m.strength for v, m in zip(values, metas))
    return min(1.0, max(-1.0, base + shift))


def effective_support(edge: SupportEdge, state: EvaluationState) -> float:
    """Base strength shifted by the edge's meta endorsements, clamped to [-1, 1].

    Each meta endorser shifts the support by belief * relative certainty *
    meta strength, relative certainty taken among the edge's meta endorsers.
    """
    if not edge.meta:
        return edge.base_strength
    return _meta_adjusted(edge.base_strength, edge.meta, state)


def _plan(network: Network, target: str) -> tuple:
    plan = network._plans.get(target)
    if plan is None:
        node = network.nodes[target]
        edges = tuple((e.src, e.key, e.base_strength, e.meta) for e in network.incoming(target))
        fallback = node.intuition if node.intuition is not None else NO_EVIDENCE
        plan = (edges, tuple(network.clusters_for(target)), node.intuition, fallback)
        network._plans[target] = plan
    return plan


def resolve_supports(target: str, network: Network, state: EvaluationState) -> list[SupportEdge]:
    """Write effective supports of every edge into ``target`` to ``state``; returns those edges."""
    _resolve(_plan(network, target), state)
    return network.incoming(target)


def _resolve(plan: tuple, state: EvaluationState) -> None:
    edges, clusters = plan[0], plan[1]
    meta, eff, inhibition = state.meta_support, state.effective_support, state.inhibition
    for _, key, base, metas in edges:
        s = _meta_adjusted(base, metas, state) if metas else base
        meta[key] = s
        eff[key] = s
        if inhibition:
            inhibition.pop(key, None)
    for cluster in clusters:
        apply_exclusion(cluster, state)


def node_rationale(target: str, network: Network, state: EvaluationState) -> tuple[Rationale, bool]:
    """``target``'s rationale from the values in ``state``; the flag marks an intuition fallback.

    Edge supports into ``target`` are written to ``state``; the node's own
    rationale is not.
    """
    plan = _plan(network, target)
    edges = plan[0]
    if not edges:
        value = _fallback(plan[2], target)
        return Rationale(value.belief, value.certainty), True
    _resolve(plan, state)
    rationale, eff = state.rationale, state.effective_support
    triples = []
    for src, key, _, _ in edges:
        v = rationale.get(src) or state.value(src)
        triples.append((v.belief, v.certainty, eff[key]))
    return combine(triples, plan[3], target)


@dataclass
class NodeBreakdown:
    """Everything that went into one node's rationale."""

    target: str
    views: list[EndorserView]
    relative_certainty: dict[str, float]
    relative_importance: dict[str, float]
    rationale: Rationale
    from_intuition: bool
    meta_support: dict[Edge, float] = field(default_factory=dict)

    def contribution(self, endorser: str) -> float:
        view = next(v for v in self.views if v.endorser == endorser)
        r = self.relative_importance.get(endorser, 0.0)
        return self.relative_certainty[endorser] * r * view.belief


def breakdown(target: str, network: Network, state: EvaluationState) -> NodeBreakdown:
    """Like ``node_rationale`` but keeps every intermediate quantity."""
    result, from_intuition = node_rationale(target, network, state)
    edges = network.incoming(target)
    views = []
    for e in edges:
        v = state.value(e.src)
        views.append(EndorserView(e.src, v.belief, v.certainty, state.effective_support[e.key]))
    rcs = relative_certainty([v.certainty for v in views])
    return NodeBreakdown(
        target,
        views,
        {v.endorser: rc for v, rc in zip(views, rcs)},
        relative_importance(views),
        result,
        from_intuition,
        {e.key: state.meta_support[e.key] for e in edges},
    )


def evaluate_node(target: str, network: Network, state: EvaluationState) -> Rationale:
    result, _ = node_rationale(target, network, state)
    state.rationale[target] = result
    return result
