"""Endorsement networks: belief and certainty from weighted reasons for and against."""

from .contradiction import ContradictionReport, find_contradictions, find_intuitive, find_rational
from .errors import (
    DuplicateEdge,
    DuplicateNode,
    EndorseError,
    InvalidCluster,
    MissingValue,
    NetworkError,
    RangeViolation,
    SelfEndorsement,
    StaleState,
    Undefined,
    UnknownEdge,
    UnknownNode,
)
from .evaluation import (
    EndorserView,
    compute_belief,
    compute_certainty,
    effective_support,
    endorsement_strength,
    evaluate_node,
    relative_certainty,
    relative_importance,
)
from .exclusivity import apply_exclusion, select_winner
from .explanation import Annotation, Explanation, ExplanationEntry, explain
from .model import (
    ExclusionCluster,
    Intuition,
    MetaEndorsement,
    Network,
    PropositionNode,
    Rationale,
    SupportEdge,
    Violation,
    WinnerMetric,
    validate,
)
from .netfmt import Diagnostic, ParseError, SourceSpan, load, parse, serialize
from .propagation import (
    EvaluationReport,
    RelaxationConfig,
    dependency_graph,
    evaluate,
    evaluate_incremental,
)
from .state import EvaluationState

__version__ = "0.1.0"
