"""Network data model: propositions, supports, meta endorsements and exclusion clusters.

A network holds proposition nodes connected by weighted support edges.  The
strength of an edge can itself be endorsed by a third node (a meta
endorsement), and a group of endorsers of one target can be declared mutually
exclusive.  Builder methods enforce the invariants eagerly; ``validate``
reports every violation of a network assembled some other way.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

from .errors import (
    DuplicateEdge,
    DuplicateNode,
    InvalidCluster,
    RangeViolation,
    SelfEndorsement,
    UnknownEdge,
    UnknownNode,
)

NODE_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")
DEFAULT_THRESHOLD = 0.5
DEFAULT_INHIBITION = 1.0

Edge = tuple[str, str]


def _check_range(what: str, value: float, lo: float, hi: float) -> None:
    if not (lo <= value <= hi):
        raise RangeViolation(f"{what} {value!r} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class Rationale:
    """A (belief, certainty) pair; belief in [-1, 1], certainty in [0, 1]."""

    belief: float
    certainty: float

    def __post_init__(self) -> None:
        if not (-1.0 <= self.belief <= 1.0 and 0.0 <= self.certainty <= 1.0):
            _check_range("belief", self.belief, -1.0, 1.0)
            _check_range("certainty", self.certainty, 0.0, 1.0)


@dataclass(frozen=True)
class Intuition(Rationale):
    """An externally supplied (belief, certainty) pair that evaluation never overwrites."""


@dataclass(frozen=True)
class PropositionNode:
    id: str
    intuition: Optional[Intuition] = None
    threshold: float = DEFAULT_THRESHOLD
    label: Optional[str] = None


@dataclass(frozen=True)
class MetaEndorsement:
    endorser: str
    strength: float


@dataclass(frozen=True)
class SupportEdge:
    src: str
    dst: str
    base_strength: float
    meta: tuple[MetaEndorsement, ...] = ()

    @property
    def key(self) -> Edge:
        return (self.src, self.dst)

    @property
    def inhibitory(self) -> bool:
        return self.base_strength < 0


class WinnerMetric(enum.Enum):
    BELIEF = "belief"
    COMBINED = "combined"


@dataclass(frozen=True)
class ExclusionCluster:
    target: str
    members: frozenset[str]
    inhibition: float = DEFAULT_INHIBITION
    winner_metric: WinnerMetric = WinnerMetric.BELIEF


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: tuple[str, ...] = ()

    def __str__(self) -> str:
        return self.message


class Network:
    """The pair of proposition nodes and support nodes.

    Builder methods mutate in place and return ``self`` so calls chain.  Once
    a network is handed to evaluation treat it as read-only; it is safe to
    share between concurrent evaluations.
    """

    def __init__(
        self,
        nodes: Optional[Mapping[str, PropositionNode]] = None,
        edges: Iterable[SupportEdge] = (),
        clusters: Iterable[ExclusionCluster] = (),
    ):
        self.nodes: dict[str, PropositionNode] = dict(nodes or {})
        self.edges: list[SupportEdge] = list(edges)
        self.clusters: list[ExclusionCluster] = list(clusters)
        self._invalidate()

    def _invalidate(self) -> None:
        self._index: Optional[dict[str, list[SupportEdge]]] = None
        self._cluster_index: Optional[dict[str, list[ExclusionCluster]]] = None
        # per-target evaluation plans, filled lazily by the evaluation module
        self._plans: dict[str, tuple] = {}

    # -- builders ---------------------------------------------------------

    def add_node(
        self,
        node_id: str,
        intuition: Optional[tuple[float, float] | Intuition] = None,
        threshold: float = DEFAULT_THRESHOLD,
        label: Optional[str] = None,
    ) -> "Network":
        if not NODE_ID_RE.match(node_id or ""):
            raise RangeViolation(f"invalid node id {node_id!r}")
        if node_id in self.nodes:
            raise DuplicateNode(f"node {node_id!r} already declared")
        if intuition is not None and not isinstance(intuition, Intuition):
            intuition = Intuition(*intuition)
        _check_range("threshold", threshold, 0.0, 2.0)
        self.nodes[node_id] = PropositionNode(node_id, intuition, threshold, label)
        self._invalidate()
        return self

    def add_edge(self, src: str, dst: str, strength: float) -> "Network":
        self._require(src, dst)
        if src == dst:
            raise SelfEndorsement(f"{src} cannot endorse itself")
        if strength == 0:
            raise RangeViolation("support strength must be nonzero")
        _check_range("support strength", strength, -1.0, 1.0)
        if self.find_edge(src, dst) is not None:
            raise DuplicateEdge(f"support {src} -> {dst} already declared")
        self.edges.append(SupportEdge(src, dst, strength))
        self._invalidate()
        return self

    def add_meta(self, endorser: str, src: str, dst: str, strength: float) -> "Network":
        self._require(endorser)
        pos = self._edge_position(src, dst)
        if endorser in (src, dst):
            raise SelfEndorsement(f"{endorser} cannot endorse its own support {src} -> {dst}")
        if strength == 0:
            raise RangeViolation("meta endorsement strength must be nonzero")
        _check_range("meta endorsement strength", strength, -1.0, 1.0)
        edge = self.edges[pos]
        if any(m.endorser == endorser for m in edge.meta):
            raise DuplicateEdge(f"{endorser} already endorses {src} -> {dst}")
        self.edges[pos] = replace(edge, meta=edge.meta + (MetaEndorsement(endorser, strength),))
        self._invalidate()
        return self

    def add_cluster(
        self,
        target: str,
        members: Iterable[str],
        inhibition: float = DEFAULT_INHIBITION,
        metric: WinnerMetric | str = WinnerMetric.BELIEF,
    ) -> "Network":
        members = list(members)
        self._require(target, *members)
        if len(set(members)) != len(members):
            raise InvalidCluster("cluster members must be distinct")
        if len(members) < 2:
            raise InvalidCluster("a cluster needs at least two members")
        for m in members:
            if self.find_edge(m, target) is None:
                raise InvalidCluster(f"cluster member {m} does not endorse {target}")
        for other in self.clusters_for(target):
            if other.members & set(members):
                raise InvalidCluster(f"overlapping clusters on {target}")
        _check_range("inhibition", inhibition, 0.0, 1.0)
        self.clusters.append(
            ExclusionCluster(target, frozenset(members), inhibition, WinnerMetric(metric))
        )
        self._invalidate()
        return self

    # -- queries ----------------------------------------------------------

    def find_edge(self, src: str, dst: str) -> Optional[SupportEdge]:
        for e in self.incoming(dst):
            if e.src == src:
                return e
        return None

    def edge(self, src: str, dst: str) -> SupportEdge:
        found = self.find_edge(src, dst)
        if found is None:
            raise UnknownEdge(src, dst)
        return found

    def incoming(self, dst: str) -> list[SupportEdge]:
        """Edges into ``dst`` ordered by source id."""
        if self._index is None:
            index: dict[str, list[SupportEdge]] = {}
            for e in self.edges:
                index.setdefault(e.dst, []).append(e)
            for lst in index.values():
                lst.sort(key=lambda e: e.src)
            self._index = index
        return self._index.get(dst, [])

    def clusters_for(self, target: str) -> list[ExclusionCluster]:
        if self._cluster_index is None:
            index: dict[str, list[ExclusionCluster]] = {}
            for c in self.clusters:
                index.setdefault(c.target, []).append(c)
            self._cluster_index = index
        return self._cluster_index.get(target, [])

    def copy(self) -> "Network":
        return Network(self.nodes, self.edges, self.clusters)

    def with_intuitions(self, overrides: Mapping[str, tuple[float, float] | Intuition]) -> "Network":
        """A copy with some node intuitions replaced; the original is untouched."""
        net = self.copy()
        for node_id, value in overrides.items():
            node = net.nodes.get(node_id)
            if node is None:
                raise UnknownNode(node_id, tuple(sorted(self.nodes)))
            if not isinstance(value, Intuition):
                value = Intuition(*value)
            net.nodes[node_id] = replace(node, intuition=value)
        net._invalidate()
        return net

    def canonical_key(self):
        nodes = tuple(self.nodes[k] for k in sorted(self.nodes))
        edges = tuple(
            sorted(
                (e.src, e.dst, e.base_strength, tuple(sorted((m.endorser, m.strength) for m in e.meta)))
                for e in self.edges
            )
        )
        clusters = tuple(
            sorted(
                (c.target, tuple(sorted(c.members)), c.inhibition, c.winner_metric.value)
                for c in self.clusters
            )
        )
        return nodes, edges, clusters

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __repr__(self) -> str:
        return (
            f"Network({len(self.nodes)} nodes, {len(self.edges)} supports, "
            f"{len(self.clusters)} clusters)"
        )

    def _require(self, *node_ids: str) -> None:
        for n in node_ids:
            if n not in self.nodes:
                raise UnknownNode(n, tuple(sorted(self.nodes)))

    def _edge_position(self, src: str, dst: str) -> int:
        for i, e in enumerate(self.edges):
            if e.src == src and e.dst == dst:
                return i
        raise UnknownEdge(src, dst)


def _in_range(value: float, lo: float, hi: float) -> bool:
    return lo <= value <= hi


def validate(network: Network) -> list[Violation]:
    """Every structural invariant violation in ``network``; empty means valid."""
    out: list[Violation] = []
    nodes = network.nodes

    def v(code: str, message: str, *subject: str) -> None:
        out.append(Violation(code, message, subject))

    for key, node in nodes.items():
        if key != node.id or not NODE_ID_RE.match(node.id or ""):
            v("bad-id", f"invalid node id {node.id!r}", key)
        if node.intuition is not None:
            b, c = node.intuition.belief, node.intuition.certainty
            if not (_in_range(b, -1, 1) and _in_range(c, 0, 1)):
                v("range", f"intuition of {key} out of range", key)
        if not _in_range(node.threshold, 0.0, 2.0):
            v("range", f"threshold of {key} outside [0, 2]", key)

    seen: set[Edge] = set()
    has_incoming: set[str] = set()
    for e in network.edges:
        has_incoming.add(e.dst)
        for end in (e.src, e.dst):
            if end not in nodes:
                v("unknown-node", f"support {e.src} -> {e.dst} references unknown node {end}", end)
        if e.src == e.dst:
            v("self-endorsement", f"{e.src} endorses itself", e.src)
        if e.base_strength == 0:
            v("zero-support", f"zero support strength on {e.src} -> {e.dst}", e.src, e.dst)
        elif not _in_range(e.base_strength, -1, 1):
            v("range", f"support strength on {e.src} -> {e.dst} outside [-1, 1]", e.src, e.dst)
        if e.key in seen:
            v("duplicate-edge", f"duplicate support {e.src} -> {e.dst}", e.src, e.dst)
        seen.add(e.key)
        meta_seen: set[str] = set()
        for m in e.meta:
            if m.endorser not in nodes:
                v("unknown-node", f"meta endorser {m.endorser} of {e.src} -> {e.dst} is unknown", m.endorser)
            if m.endorser in (e.src, e.dst):
                v("meta-endpoint", f"{m.endorser} meta-endorses its own support {e.src} -> {e.dst}", m.endorser)
            if m.strength == 0:
                v("zero-support", f"zero meta strength from {m.endorser} on {e.src} -> {e.dst}", m.endorser)
            elif not _in_range(m.strength, -1, 1):
                v("range", f"meta strength from {m.endorser} on {e.src} -> {e.dst} outside [-1, 1]", m.endorser)
            if m.endorser in meta_seen:
                v("duplicate-edge", f"duplicate meta {m.endorser} on {e.src} -> {e.dst}", m.endorser)
            meta_seen.add(m.endorser)

    for key, node in nodes.items():
        if key not in has_incoming and node.intuition is None:
            v("source-without-intuition", f"source node {key} lacks intuition", key)

    claimed: dict[str, set[str]] = {}
    for c in network.clusters:
        if c.target not in nodes:
            v("unknown-node", f"cluster target {c.target} is unknown", c.target)
        if len(c.members) < 2:
            v("cluster-size", f"cluster on {c.target} has fewer than two members", c.target)
        if not _in_range(c.inhibition, 0, 1):
            v("range", f"cluster inhibition on {c.target} outside [0, 1]", c.target)
        for m in sorted(c.members):
            if (m, c.target) not in seen:
                v("cluster-member-without-edge", f"cluster member {m} does not endorse {c.target}", m, c.target)
        taken = claimed.setdefault(c.target, set())
        if taken & c.members:
            v("cluster-overlap", f"overlapping clusters on {c.target}", c.target)
        taken |= c.members
    return out
