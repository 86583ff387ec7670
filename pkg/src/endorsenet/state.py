from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MissingValue
from .model import Edge, Rationale


@dataclass
class EvaluationState:
    """Per-node rationales and per-edge supports produced by one evaluation pass.

    ``meta_support`` holds each edge's support after meta endorsements;
    ``effective_support`` additionally reflects exclusion-cluster inhibition.
    ``inhibition`` records the suppression factor applied to every losing
    cluster edge, and ``winners`` maps each cluster's member set to its chosen winner.
    """

    rationale: dict[str, Rationale] = field(default_factory=dict)
    effective_support: dict[Edge, float] = field(default_factory=dict)
    meta_support: dict[Edge, float] = field(default_factory=dict)
    inhibition: dict[Edge, float] = field(default_factory=dict)
    winners: dict[frozenset[str], str] = field(default_factory=dict)
    ordering: list[str] = field(default_factory=list)

    def value(self, node_id: str) -> Rationale:
        try:
            return self.rationale[node_id]
        except KeyError:
            raise MissingValue(node_id, "no value available yet") from None

    def copy(self) -> "EvaluationState":
        return EvaluationState(
            dict(self.rationale),
            dict(self.effective_support),
            dict(self.meta_support),
            dict(self.inhibition),
            dict(self.winners),
            list(self.ordering),
        )
