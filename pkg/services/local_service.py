"""Local Service - Butterflies through a single vertex or a single edge."""

import logging
from typing import Tuple

import numpy as np

from models.butterfly import LocalCount
from models.errors import NotAnEdgeError
from models.graph import BipartiteGraph, Side, VertexRef

logger = logging.getLogger(__name__)


def count_per_vertex(graph: BipartiteGraph, vertex: VertexRef) -> int:
    """
    bfly_v: sum over same-side w != v of C(|Γ_v ∩ Γ_w|, 2).

    The distance-2 multiplicities come from one gather over the adjacency
    lists of v's neighbors; the work is |Γ²_v| counted with repetition.
    """
    neighbors = graph.neighbors(vertex)
    reach = graph.gather_neighbors(vertex.side.opposite, neighbors)
    reach = reach[reach != vertex.index]
    if reach.size == 0:
        return 0
    _, multiplicity = np.unique(reach, return_counts=True)
    multiplicity = multiplicity.astype(np.int64)
    return int(np.sum(multiplicity * (multiplicity - 1) // 2))


def edge_endpoints(graph: BipartiteGraph, u: VertexRef, v: VertexRef) -> Tuple[int, int]:
    """Dense (left, right) of an edge given its endpoints in either order."""
    graph.validate_vertex(u)
    graph.validate_vertex(v)
    if u.side == v.side:
        raise NotAnEdgeError(f"{u} and {v} lie on the same side")
    left, right = (u, v) if u.side is Side.LEFT else (v, u)
    if not graph.has_edge(left.index, right.index):
        raise NotAnEdgeError(f"({left}, {right}) is not an edge")
    return left.index, right.index


def count_per_edge(graph: BipartiteGraph, u: VertexRef, v: VertexRef) -> int:
    """
    bfly_e for e = (u, v): pairs (w, x), w in Γ_a minus b, x in Γ_b minus a, with (w, x) an edge.

    The walk starts from the lower-degree endpoint a; membership in Γ_b is
    tested against its sorted adjacency.
    """
    left, right = edge_endpoints(graph, u, v)
    a = VertexRef(Side.LEFT, left)
    b = VertexRef(Side.RIGHT, right)
    if graph.degree(a) > graph.degree(b):
        a, b = b, a

    partners = graph.neighbors(a)
    partners = partners[partners != b.index]
    if partners.size == 0:
        return 0
    reach = graph.gather_neighbors(b.side, partners)
    closing = np.isin(reach, graph.neighbors(b), assume_unique=False) & (reach != a.index)
    return int(np.count_nonzero(closing))


def local_count(graph: BipartiteGraph, subject) -> LocalCount:
    """LocalCount for a VertexRef or a (VertexRef, VertexRef) edge."""
    if isinstance(subject, VertexRef):
        return LocalCount(subject, count_per_vertex(graph, subject))
    u, v = subject
    return LocalCount((u, v), count_per_edge(graph, u, v))
