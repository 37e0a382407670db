"""Error types raised across the butterfly toolkit."""

from typing import Optional


class ButterflyToolkitError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class InvalidArgumentError(ButterflyToolkitError, ValueError):
    """An argument is outside its documented range."""


class InvalidVertexError(InvalidArgumentError):
    """A vertex reference does not exist in the graph."""


class NotAnEdgeError(InvalidArgumentError):
    """A vertex pair that was expected to be an edge is not one."""


class GraphParseError(ButterflyToolkitError, ValueError):
    """
    A line of an edge-list file could not be parsed.

    Carries the 1-based line number and the offending token so the CLI can
    point at the exact spot in the input.
    """

    def __init__(self, message: str, line_number: int, token: Optional[str] = None):
        self.line_number = line_number
        self.token = token
        super().__init__(f"line {line_number}: {message}")


class EmptyGraphError(ButterflyToolkitError, ValueError):
    """The graph has no edges after normalization."""


class NoWedgesError(ButterflyToolkitError):
    """Wedge sampling was requested on a graph without wedges."""


class CountOverflowError(ButterflyToolkitError, OverflowError):
    """A butterfly count no longer fits in an unsigned 64-bit integer."""


class OracleGuardError(ButterflyToolkitError):
    """The brute-force oracle refused a graph larger than its guards."""


class PairClassificationError(ButterflyToolkitError, RuntimeError):
    """Two butterflies share a vertex/edge combination that cannot occur."""
