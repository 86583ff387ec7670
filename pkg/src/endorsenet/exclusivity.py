"""Winner-take-all competition among mutually exclusive endorsers of one target.

The winning member keeps its support; every other member's support is
scaled by ``1 - inhibition * max(b*, 0)`` where b* is the winner's belief.
Inhibition 0 treats the members as independent evidence, inhibition 1 with a
fully believed winner silences the rest.
"""

from __future__ import annotations

from .model import Edge, ExclusionCluster, WinnerMetric
from .state import EvaluationState

# scores closer than this count as tied; chains of single endorsers copy beliefs
# exactly, so ties are common and must not hinge on rounding noise
TIE_TOLERANCE = 1e-12


def _relative(certainties: dict[str, float]) -> dict[str, float]:
    top = max(certainties.values(), default=0.0)
    if top <= 0.0:
        return {k: 0.0 for k in certainties}
    return {k: c / top for k, c in certainties.items()}


def select_winner(cluster: ExclusionCluster, state: EvaluationState) -> str:
    """Member with the highest score; ties go to higher certainty, then the smaller id."""
    members = sorted(cluster.members)
    values = {m: state.value(m) for m in members}
    if cluster.winner_metric is WinnerMetric.COMBINED:
        rc = _relative({m: values[m].certainty for m in members})

        def score(m: str) -> float:
            edge = (m, cluster.target)
            s = state.meta_support.get(edge, state.effective_support.get(edge, 0.0))
            return values[m].belief * rc[m] * abs(s)
    else:

        def score(m: str) -> float:
            return values[m].belief

    best = members[0]
    best_score, best_cert = score(best), values[best].certainty
    for m in members[1:]:
        s, c = score(m), values[m].certainty
        if s > best_score + TIE_TOLERANCE or (
            abs(s - best_score) <= TIE_TOLERANCE and c > best_cert + TIE_TOLERANCE
        ):
            best, best_score, best_cert = m, s, c
    return best


def suppression_factor(cluster: ExclusionCluster, winner_belief: float) -> float:
    return 1.0 - cluster.inhibition * max(winner_belief, 0.0)


def apply_exclusion(cluster: ExclusionCluster, state: EvaluationState) -> dict[Edge, float]:
    """Scale the losing members' effective supports in ``state``; returns the member supports."""
    winner = select_winner(cluster, state)
    state.winners[cluster.members] = winner
    factor = suppression_factor(cluster, state.value(winner).belief)
    out: dict[Edge, float] = {}
    for m in sorted(cluster.members):
        edge = (m, cluster.target)
        s = state.meta_support.get(edge, state.effective_support[edge])
        if m != winner and factor != 1.0:
            s = s * factor
            state.inhibition[edge] = factor
        state.effective_support[edge] = s
        out[edge] = s
    return out
