"""Exception hierarchy shared by every endorsenet module."""

from __future__ import annotations


class EndorseError(Exception):
    """Base class for all endorsenet failures."""


class NetworkError(EndorseError):
    """A builder call would break a network invariant."""


class UnknownNode(NetworkError, KeyError):
    def __init__(self, node_id: str, known: tuple[str, ...] = ()):
        self.node_id = node_id
        self.known = known
        super().__init__(node_id)

    def __str__(self) -> str:
        return f"unknown node {self.node_id!r}"


class UnknownEdge(NetworkError, KeyError):
    def __init__(self, src: str, dst: str):
        self.src, self.dst = src, dst
        super().__init__((src, dst))

    def __str__(self) -> str:
        return f"no support {self.src} -> {self.dst}"


class DuplicateNode(NetworkError):
    pass


class DuplicateEdge(NetworkError):
    pass


class SelfEndorsement(NetworkError):
    pass


class RangeViolation(NetworkError, ValueError):
    pass


class InvalidCluster(NetworkError):
    pass


class EvaluationError(EndorseError):
    """Raised when a node value cannot be computed."""

    def __init__(self, node_id: str, message: str):
        self.node_id = node_id
        super().__init__(f"{node_id}: {message}")


class Undefined(EvaluationError):
    """No usable endorsements and no intuition to fall back on."""


class MissingValue(EvaluationError):
    """An endorser or meta endorser has not been evaluated yet."""


class StaleState(EndorseError):
    """A previous evaluation state does not cover the current network."""
