"""Whole-network evaluation.

Nodes are evaluated strongly connected component by component in dependency
order.  Acyclic parts are evaluated directly; every cyclic component is
relaxed with damped synchronous sweeps until successive iterates differ by
at most ``epsilon``.  Values stay bounded at every sweep, which is what keeps
propagation in check; nothing decays with path length.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import networkx as nx

from .errors import StaleState, UnknownNode
from .evaluation import evaluate_node, node_rationale
from .model import Network, Rationale
from .state import EvaluationState

log = logging.getLogger(__name__)

SweepObserver = Callable[[int, Mapping[str, Rationale]], None]


@dataclass(frozen=True)
class RelaxationConfig:
    alpha: float = 0.5
    epsilon: float = 1e-6
    max_iters: int = 1000

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"damping alpha must be in (0, 1], got {self.alpha}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be positive, got {self.max_iters}")


@dataclass
class EvaluationReport:
    state: EvaluationState
    converged: bool
    iterations: int
    cycles: list[list[str]] = field(default_factory=list)
    gated: list[list[str]] = field(default_factory=list)
    recomputed: list[str] = field(default_factory=list)
    residual: float = 0.0


@dataclass
class DependencyGraph:
    graph: nx.DiGraph
    components: list[frozenset[str]]

    def cycles(self) -> list[list[str]]:
        return [sorted(c) for c in self.components if len(c) > 1]

    def descendants(self, nodes: Iterable[str]) -> set[str]:
        out: set[str] = set()
        for n in nodes:
            if n not in out:
                out.add(n)
                out |= nx.descendants(self.graph, n)
        return out


def dependency_graph(network: Network) -> DependencyGraph:
    """Node j depends on i when i endorses j or meta-endorses an edge into j.

    Cluster members already endorse their target, so clusters add no arcs.
    Components come back in a deterministic topological order.
    """
    g = nx.DiGraph()
    g.add_nodes_from(sorted(network.nodes))
    for e in network.edges:
        g.add_edge(e.src, e.dst)
        for m in e.meta:
            g.add_edge(m.endorser, e.dst)
    cond = nx.condensation(g)
    members = nx.get_node_attributes(cond, "members")
    order = nx.lexicographical_topological_sort(cond, key=lambda c: min(members[c]))
    return DependencyGraph(g, [frozenset(members[c]) for c in order])


def _initial(network: Network, node_id: str) -> Rationale:
    intuition = network.nodes[node_id].intuition
    if intuition is None:
        return Rationale(0.0, 0.0)
    return Rationale(intuition.belief, intuition.certainty)


def relax(
    members: Iterable[str],
    network: Network,
    state: EvaluationState,
    config: RelaxationConfig,
    observer: Optional[SweepObserver] = None,
) -> tuple[bool, int, float]:
    """Damped fixed-point iteration over one cyclic component, in place.

    Returns (converged, sweeps, final residual).
    """
    members = sorted(members)
    for m in members:
        state.rationale[m] = _initial(network, m)
    alpha = config.alpha
    residual = float("inf")
    for sweep in range(1, config.max_iters + 1):
        fresh = [node_rationale(m, network, state)[0] for m in members]
        residual = 0.0
        iterate: dict[str, Rationale] = {}
        for m, f in zip(members, fresh):
            x = state.rationale[m]
            # the guards only absorb rounding; a convex mix of bounded values is bounded
            b = min(1.0, max(-1.0, x.belief + alpha * (f.belief - x.belief)))
            c = min(1.0, max(0.0, x.certainty + alpha * (f.certainty - x.certainty)))
            db, dc = abs(b - x.belief), abs(c - x.certainty)
            if db > residual:
                residual = db
            if dc > residual:
                residual = dc
            iterate[m] = Rationale(b, c)
        state.rationale.update(iterate)
        if observer is not None:
            observer(sweep, iterate)
        if residual <= config.epsilon:
            break
    else:
        log.warning("relaxation of %s stopped after %d sweeps, residual %.3g", members, sweep, residual)
    # leave edge supports consistent with the final iterate
    for m in members:
        node_rationale(m, network, state)
    return residual <= config.epsilon, sweep, residual


def evaluate(
    network: Network,
    config: Optional[RelaxationConfig] = None,
    observer: Optional[SweepObserver] = None,
) -> EvaluationReport:
    config = config or RelaxationConfig()
    deps = dependency_graph(network)
    state = EvaluationState()
    converged, sweeps, worst = True, 0, 0.0
    for comp in deps.components:
        if len(comp) == 1:
            (node_id,) = comp
            value = evaluate_node(node_id, network, state)
            if observer is not None:
                observer(0, {node_id: value})
        else:
            ok, n, residual = relax(comp, network, state, config, observer)
            converged &= ok
            sweeps += n
            worst = max(worst, residual)
        state.ordering.extend(sorted(comp))
    return EvaluationReport(
        state,
        converged,
        sweeps,
        cycles=deps.cycles(),
        recomputed=list(state.ordering),
        residual=worst,
    )


def _gate_open(
    comp: frozenset[str],
    network: Network,
    deps: DependencyGraph,
    previous: EvaluationState,
    state: EvaluationState,
    affected: set[str],
    changed: set[str],
) -> bool:
    """True when some entry into ``comp`` diverges from its previous belief by more than its threshold."""
    entries = {p for m in comp for p in deps.graph.predecessors(m) if p not in comp and p in affected}
    entries |= comp & changed
    for i in sorted(entries):
        node = network.nodes[i]
        before = previous.rationale[i].belief
        gaps = []
        if i not in comp:
            gaps.append(abs(state.rationale[i].belief - before))
        if i in changed:
            if node.intuition is None:
                return True
            gaps.append(abs(node.intuition.belief - before))
        if max(gaps) > node.threshold:
            return True
    return False


def evaluate_incremental(
    network: Network,
    previous: EvaluationState,
    changed: Iterable[str],
    config: Optional[RelaxationConfig] = None,
    gating: bool = True,
) -> EvaluationReport:
    """Re-evaluate only what is reachable from ``changed``.

    A reachable cyclic component is re-relaxed only when one of its entry
    nodes moved by more than its threshold; otherwise it keeps its previous
    values and is listed in ``gated``.  ``gating=False`` re-relaxes every
    reachable component.
    """
    config = config or RelaxationConfig()
    missing = set(network.nodes) - set(previous.rationale)
    if missing:
        raise StaleState(f"previous state lacks {sorted(missing)}")
    changed = set(changed)
    for n in changed:
        if n not in network.nodes:
            raise UnknownNode(n, tuple(sorted(network.nodes)))
    deps = dependency_graph(network)
    state = previous.copy()
    if not changed:
        return EvaluationReport(state, True, 0, cycles=deps.cycles())

    affected = deps.descendants(changed)
    converged, sweeps, worst = True, 0, 0.0
    gated: list[list[str]] = []
    recomputed: list[str] = []
    for comp in deps.components:
        if not comp & affected:
            continue
        if len(comp) == 1:
            (node_id,) = comp
            evaluate_node(node_id, network, state)
            recomputed.append(node_id)
            continue
        if gating and not _gate_open(comp, network, deps, previous, state, affected, changed):
            gated.append(sorted(comp))
            continue
        ok, n, residual = relax(comp, network, state, config)
        converged &= ok
        sweeps += n
        worst = max(worst, residual)
        recomputed.extend(sorted(comp))
    return EvaluationReport(
        state,
        converged,
        sweeps,
        cycles=deps.cycles(),
        gated=gated,
        recomputed=recomputed,
        residual=worst,
    )
