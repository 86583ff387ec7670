"""Reasons for and against a node's belief, one entry per endorsement."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .contradiction import DEFAULT_TAU, IntuitiveContradiction, RationalContradiction, find_intuitive, rational_for
from .errors import UnknownNode
from .evaluation import breakdown
from .model import Network, Rationale
from .state import EvaluationState

GATED_NOTE = "retained previous value, gate not exceeded"


class Annotation(enum.Enum):
    ANCHOR = "anchor"
    IGNORED = "ignored"
    INHIBITED_BY_CLUSTER = "inhibited_by_cluster"
    META_MODIFIED = "meta_modified"


@dataclass(frozen=True)
class ExplanationEntry:
    endorser: str
    belief: float
    certainty: float
    base_support: float
    support: float
    relative_importance: float
    relative_certainty: float
    contribution: float
    annotations: frozenset[Annotation] = frozenset()

    @property
    def active(self) -> bool:
        return Annotation.IGNORED not in self.annotations

    def to_dict(self) -> dict:
        return {
            "endorser": self.endorser,
            "belief": self.belief,
            "certainty": self.certainty,
            "base_support": self.base_support,
            "effective_support": self.support,
            "relative_importance": self.relative_importance,
            "relative_certainty": self.relative_certainty,
            "contribution": self.contribution,
            "annotations": sorted(a.value for a in self.annotations),
        }


@dataclass
class Explanation:
    node: str
    rationale: Rationale
    entries: list[ExplanationEntry]
    from_intuition: bool
    rational: Optional[RationalContradiction] = None
    intuitive: Optional[IntuitiveContradiction] = None
    notes: list[str] = field(default_factory=list)

    @property
    def anchor(self) -> Optional[ExplanationEntry]:
        return next((e for e in self.entries if Annotation.ANCHOR in e.annotations), None)

    def reconstructed_belief(self) -> float:
        return sum(e.contribution for e in self.entries if e.active)

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "belief": self.rationale.belief,
            "certainty": self.rationale.certainty,
            "from_intuition": self.from_intuition,
            "entries": [e.to_dict() for e in self.entries],
            "rational_contradiction": None
            if self.rational is None
            else {
                "pro": list(self.rational.pro),
                "con": list(self.rational.con),
                "max_pro": self.rational.max_pro,
                "min_con": self.rational.min_con,
            },
            "intuitive_contradiction": None
            if self.intuitive is None
            else {
                "intuition": self.intuitive.intuition,
                "rational": self.intuitive.rational,
                "threshold": self.intuitive.threshold,
            },
            "notes": list(self.notes),
        }

    def render(self) -> str:
        r = self.rationale
        lines = [f"{self.node}: belief {r.belief:+.4f}  certainty {r.certainty:.4f}"]
        for note in self.notes:
            lines.append(f"  {note}")
        if self.entries:
            lines.append(
                f"  {'endorser':<16} {'belief':>8} {'cert':>7} {'support':>8} {'r':>8} {'rc':>7} {'contrib':>8}"
            )
        for e in self.entries:
            tags = ",".join(sorted(a.name for a in e.annotations))
            side = "for" if e.contribution > 0 else "against" if e.contribution < 0 else "-"
            lines.append(
                f"  {e.endorser:<16} {e.belief:>+8.4f} {e.certainty:>7.4f} {e.support:>+8.4f} "
                f"{e.relative_importance:>+8.4f} {e.relative_certainty:>7.4f} {e.contribution:>+8.4f}"
                f"  {side}{'  [' + tags + ']' if tags else ''}"
            )
        if self.rational is not None:
            lines.append(
                f"  rational contradiction: for {', '.join(self.rational.pro)} "
                f"(max {self.rational.max_pro:+.4f}), against {', '.join(self.rational.con)} "
                f"(min {self.rational.min_con:+.4f})"
            )
        if self.intuitive is not None:
            lines.append(
                f"  intuitive contradiction: intuition {self.intuitive.intuition:+.4f} vs "
                f"rational {self.intuitive.rational:+.4f} (threshold {self.intuitive.threshold:.4f})"
            )
        return "\n".join(lines)


def explain(
    node: str,
    state: EvaluationState,
    network: Network,
    tau: float = DEFAULT_TAU,
    gated: Iterable[Iterable[str]] = (),
) -> Explanation:
    if node not in network.nodes:
        raise UnknownNode(node, tuple(sorted(network.nodes)))
    rationale = state.value(node)
    scratch = state.copy()
    parts = breakdown(node, network, scratch)

    entries = []
    for view, edge in zip(parts.views, network.incoming(node)):
        rc = parts.relative_certainty[view.endorser]
        r = parts.relative_importance.get(view.endorser, 0.0)
        tags = set()
        if rc == 0.0:
            tags.add(Annotation.IGNORED)
        if edge.key in scratch.inhibition:
            tags.add(Annotation.INHIBITED_BY_CLUSTER)
        if edge.meta and parts.meta_support[edge.key] != edge.base_strength:
            tags.add(Annotation.META_MODIFIED)
        entries.append(
            ExplanationEntry(
                view.endorser,
                view.belief,
                view.certainty,
                edge.base_strength,
                view.support,
                r,
                rc,
                0.0 if rc == 0.0 else rc * r * view.belief,
                frozenset(tags),
            )
        )
    entries.sort(key=lambda e: (-abs(e.contribution), e.endorser))
    if not parts.from_intuition:
        for i, e in enumerate(entries):
            if e.active:
                entries[i] = ExplanationEntry(
                    **{**e.__dict__, "annotations": e.annotations | {Annotation.ANCHOR}}
                )
                break

    notes = []
    if not entries:
        notes.append("no endorsements; value from intuition")
    elif parts.from_intuition:
        if network.nodes[node].intuition is not None:
            notes.append("no usable endorsements; value from intuition")
        else:
            notes.append("no usable endorsements and no intuition; belief 0, certainty 0")
    if any(node in set(g) for g in gated):
        notes.append(GATED_NOTE)

    intuitive = next((c for c in find_intuitive(state, network) if c.node == node), None)
    return Explanation(
        node,
        rationale,
        entries,
        parts.from_intuition,
        rational_for(node, state, network, tau),
        intuitive,
        notes,
    )
