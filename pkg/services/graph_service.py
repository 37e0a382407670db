"""Graph Service - Test-instance generators and graph statistics."""

import logging

import numpy as np

from models.errors import InvalidArgumentError
from models.graph import BipartiteGraph, GraphStats, exact_pair_sum, exact_square_sum
from services.rng_service import StreamTag, derived_generator

logger = logging.getLogger(__name__)


def _check_side_size(name: str, value: int) -> int:
    if int(value) != value or value < 1:
        raise InvalidArgumentError(f"{name} must be an integer >= 1: {value}")
    return int(value)


def complete_biclique(a: int, b: int) -> BipartiteGraph:
    """K_{a,b} with external ids 1..a on the left and 1..b on the right."""
    a = _check_side_size("left size", a)
    b = _check_side_size("right size", b)
    lefts = np.repeat(np.arange(1, a + 1, dtype=np.uint64), b)
    rights = np.tile(np.arange(1, b + 1, dtype=np.uint64), a)
    return BipartiteGraph.from_edges(lefts, rights)


def random_bipartite(a: int, b: int, p: float, seed: int) -> BipartiteGraph:
    """
    Each of the a*b possible edges kept independently with probability p.

    Deterministic for a fixed seed. Vertices left without edges disappear
    under normalization; p = 0 raises EmptyGraphError.
    """
    a = _check_side_size("left size", a)
    b = _check_side_size("right size", b)
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"Edge probability must lie in [0, 1]: {p}")

    rng = derived_generator(seed, StreamTag.GENERATOR)
    rows, cols = np.nonzero(rng.random((a, b)) < p)
    logger.debug("random_bipartite(%d, %d, %s, seed=%d): %d edges", a, b, p, seed, rows.size)
    return BipartiteGraph.from_edges(rows.astype(np.uint64) + 1, cols.astype(np.uint64) + 1)


def stats(graph: BipartiteGraph) -> GraphStats:
    """n, m, per-side degree-square sums, wedge count and maximum degree."""
    left, right = graph.left_degrees, graph.right_degrees
    return GraphStats(
        n=graph.vertex_count,
        m=graph.edge_count,
        left_count=graph.left_count,
        right_count=graph.right_count,
        sum_deg_sq_left=exact_square_sum(left),
        sum_deg_sq_right=exact_square_sum(right),
        wedge_count=exact_pair_sum(left) + exact_pair_sum(right),
        max_degree=int(max(left.max(), right.max())),
    )
