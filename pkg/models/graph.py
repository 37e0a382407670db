"""Graph Model - Immutable simple bipartite graph in two-sided CSR form."""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterator, Tuple

import numpy as np
import pandas as pd

from .errors import EmptyGraphError, InvalidArgumentError, InvalidVertexError, NotAnEdgeError


class Side(str, Enum):
    """Vertex partition a vertex belongs to."""
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> 'Side':
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    @classmethod
    def parse(cls, value: str) -> 'Side':
        """Parse 'left'/'l'/'right'/'r' in any case."""
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        if text in ('left', 'l'):
            return cls.LEFT
        if text in ('right', 'r'):
            return cls.RIGHT
        raise InvalidArgumentError(f"Unknown side: {value!r}")


@dataclass(frozen=True)
class VertexRef:
    """A vertex identified by its side and dense 0-based index within that side."""

    side: Side
    index: int

    def __post_init__(self):
        if int(self.index) < 0:
            raise InvalidVertexError(f"Vertex index must be non-negative: {self.index}")

    def __str__(self) -> str:
        return f"{self.side.value}:{self.index}"

    @classmethod
    def parse(cls, text: str) -> 'VertexRef':
        """Parse the 'side:index' form used on the command line."""
        side, sep, index = str(text).partition(':')
        if not sep:
            raise InvalidArgumentError(f"Vertex must look like side:index, got {text!r}")
        try:
            return cls(Side.parse(side), int(index))
        except ValueError as exc:
            if isinstance(exc, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"Vertex index is not an integer: {index!r}") from exc


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def exact_square_sum(values: np.ndarray) -> int:
    """Exact sum of squares, falling back to Python integers when int64 could overflow."""
    if values.size == 0:
        return 0
    peak = int(values.max())
    if peak < 2 ** 31 and values.size * peak * peak < 2 ** 63:
        wide = values.astype(np.int64)
        return int(np.dot(wide, wide))
    return sum(int(v) * int(v) for v in values)


def exact_pair_sum(values: np.ndarray) -> int:
    """Exact sum of C(d, 2) over an integer array."""
    if values.size == 0:
        return 0
    return (exact_square_sum(values) - int(values.sum(dtype=np.int64))) // 2


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """
    Simple bipartite graph with dense per-side indices.

    Both sides are stored as CSR arrays (indptr/indices). Every adjacency
    list is sorted ascending, duplicate-free, and no vertex has degree zero.
    External identifiers are kept per dense index so a loaded graph can be
    written back in its original naming.

    Instances are immutable; all arrays are marked read-only.
    """

    left_indptr: np.ndarray
    left_indices: np.ndarray
    right_indptr: np.ndarray
    right_indices: np.ndarray
    left_ids: np.ndarray
    right_ids: np.ndarray

    def __post_init__(self):
        for array in (self.left_indptr, self.left_indices, self.right_indptr,
                      self.right_indices, self.left_ids, self.right_ids):
            _freeze(array)
        if self.left_indices.size == 0:
            raise EmptyGraphError("Graph has no edges")

    # ============ CONSTRUCTION ============

    @classmethod
    def from_edges(cls, left_external, right_external) -> 'BipartiteGraph':
        """
        Build a normalized graph from parallel arrays of external ids.

        Dense indices follow first appearance of each external id on its
        side. Repeated edges are removed by sorting edge keys; vertices only
        exist through edges, so no degree-zero vertex survives.
        """
        left_ext = np.asarray(left_external, dtype=np.uint64).ravel()
        right_ext = np.asarray(right_external, dtype=np.uint64).ravel()
        if left_ext.size != right_ext.size:
            raise InvalidArgumentError("Left and right endpoint arrays differ in length")
        if left_ext.size == 0:
            raise EmptyGraphError("Graph has no edges")

        left_codes, left_ids = pd.factorize(left_ext, sort=False)
        right_codes, right_ids = pd.factorize(right_ext, sort=False)
        left_count, right_count = len(left_ids), len(right_ids)

        keys = np.unique(left_codes.astype(np.int64) * right_count + right_codes.astype(np.int64))
        edge_left = keys // right_count
        edge_right = keys % right_count

        left_indptr = np.zeros(left_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(edge_left, minlength=left_count), out=left_indptr[1:])

        order = np.lexsort((edge_left, edge_right))
        right_indptr = np.zeros(right_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(edge_right, minlength=right_count), out=right_indptr[1:])

        return cls(
            left_indptr=left_indptr,
            left_indices=edge_right.astype(np.int64),
            right_indptr=right_indptr,
            right_indices=edge_left[order].astype(np.int64),
            left_ids=np.asarray(left_ids, dtype=np.uint64),
            right_ids=np.asarray(right_ids, dtype=np.uint64),
        )

    def subgraph(self, edge_mask: np.ndarray) -> 'BipartiteGraph':
        """Graph on the edges selected by a boolean mask over edge indices, re-normalized."""
        mask = np.asarray(edge_mask, dtype=bool)
        if mask.shape != (self.edge_count,):
            raise InvalidArgumentError("Edge mask must have one entry per edge")
        return BipartiteGraph.from_edges(
            self.left_ids[self.edge_left[mask]],
            self.right_ids[self.edge_right[mask]],
        )

    # ============ SIZES ============

    @property
    def left_count(self) -> int:
        return len(self.left_indptr) - 1

    @property
    def right_count(self) -> int:
        return len(self.right_indptr) - 1

    @property
    def vertex_count(self) -> int:
        return self.left_count + self.right_count

    @property
    def edge_count(self) -> int:
        return int(self.left_indices.size)

    def count(self, side: Side) -> int:
        return self.left_count if side is Side.LEFT else self.right_count

    # ============ ADJACENCY ============

    def csr(self, side: Side) -> Tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) for the vertices of a side."""
        if side is Side.LEFT:
            return self.left_indptr, self.left_indices
        return self.right_indptr, self.right_indices

    @cached_property
    def left_degrees(self) -> np.ndarray:
        return _freeze(np.diff(self.left_indptr))

    @cached_property
    def right_degrees(self) -> np.ndarray:
        return _freeze(np.diff(self.right_indptr))

    def degrees(self, side: Side) -> np.ndarray:
        return self.left_degrees if side is Side.LEFT else self.right_degrees

    def validate_vertex(self, vertex: VertexRef) -> None:
        if not isinstance(vertex, VertexRef) or not 0 <= vertex.index < self.count(vertex.side):
            raise InvalidVertexError(f"Vertex {vertex} does not exist in this graph")

    def degree(self, vertex: VertexRef) -> int:
        self.validate_vertex(vertex)
        indptr, _ = self.csr(vertex.side)
        return int(indptr[vertex.index + 1] - indptr[vertex.index])

    def neighbors(self, vertex: VertexRef) -> np.ndarray:
        """Sorted dense indices of the opposite-side neighbors (read-only view)."""
        self.validate_vertex(vertex)
        indptr, indices = self.csr(vertex.side)
        return indices[indptr[vertex.index]:indptr[vertex.index + 1]]

    def gather_neighbors(self, side: Side, vertices: np.ndarray) -> np.ndarray:
        """Adjacency lists of `vertices` (all on `side`) concatenated in the given order."""
        indptr, indices = self.csr(side)
        vertices = np.asarray(vertices, dtype=np.int64)
        starts = indptr[vertices]
        counts = indptr[vertices + 1] - starts
        total = int(counts.sum())
        offsets = np.repeat(starts - (np.cumsum(counts) - counts), counts)
        return indices[offsets + np.arange(total, dtype=np.int64)]

    def has_edge(self, left_index: int, right_index: int) -> bool:
        """Binary search on the sorted adjacency of the left endpoint."""
        if not (0 <= left_index < self.left_count and 0 <= right_index < self.right_count):
            return False
        row = self.left_indices[self.left_indptr[left_index]:self.left_indptr[left_index + 1]]
        pos = int(np.searchsorted(row, right_index))
        return pos < row.size and int(row[pos]) == right_index

    def has_edges(self, left_indices: np.ndarray, right_indices: np.ndarray) -> np.ndarray:
        """Vectorized membership test over parallel arrays of dense endpoints."""
        keys = np.asarray(left_indices, dtype=np.int64) * self.right_count + np.asarray(right_indices, dtype=np.int64)
        pos = np.searchsorted(self.edge_keys, keys)
        pos = np.minimum(pos, self.edge_count - 1)
        return self.edge_keys[pos] == keys

    # ============ EDGE ENUMERATION ============

    @cached_property
    def edge_left(self) -> np.ndarray:
        """Left endpoint of every edge, in left-major edge-index order."""
        return _freeze(np.repeat(np.arange(self.left_count, dtype=np.int64), self.left_degrees))

    @property
    def edge_right(self) -> np.ndarray:
        return self.left_indices

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted keys left*right_count+right, one per edge."""
        return _freeze(self.edge_left * self.right_count + self.left_indices)

    def edge_at(self, edge_index: int) -> Tuple[VertexRef, VertexRef]:
        if not 0 <= edge_index < self.edge_count:
            raise InvalidArgumentError(f"Edge index out of range: {edge_index}")
        return (VertexRef(Side.LEFT, int(self.edge_left[edge_index])),
                VertexRef(Side.RIGHT, int(self.left_indices[edge_index])))

    def edge_index(self, left_index: int, right_index: int) -> int:
        if not self.has_edge(left_index, right_index):
            raise NotAnEdgeError(f"({left_index}, {right_index}) is not an edge")
        return int(np.searchsorted(self.edge_keys, left_index * self.right_count + right_index))

    def iter_edges(self) -> Iterator[Tuple[int, int]]:
        for left, right in zip(self.edge_left.tolist(), self.left_indices.tolist()):
            yield left, right

    # ============ GLOBAL VERTEX ENUMERATION ============
    # Left vertices come first, then right vertices offset by left_count.

    def vertex_at(self, global_index: int) -> VertexRef:
        if not 0 <= global_index < self.vertex_count:
            raise InvalidVertexError(f"Global vertex index out of range: {global_index}")
        if global_index < self.left_count:
            return VertexRef(Side.LEFT, int(global_index))
        return VertexRef(Side.RIGHT, int(global_index - self.left_count))

    def global_index(self, vertex: VertexRef) -> int:
        self.validate_vertex(vertex)
        return vertex.index if vertex.side is Side.LEFT else self.left_count + vertex.index

    @cached_property
    def all_degrees(self) -> np.ndarray:
        """Degrees in global vertex order."""
        return _freeze(np.concatenate([self.left_degrees, self.right_degrees]))

    # ============ COMPARISON ============

    def same_structure(self, other: 'BipartiteGraph') -> bool:
        """True when both graphs have identical dense adjacency and external ids."""
        return (
            np.array_equal(self.left_indptr, other.left_indptr)
            and np.array_equal(self.left_indices, other.left_indices)
            and np.array_equal(self.left_ids, other.left_ids)
            and np.array_equal(self.right_ids, other.right_ids)
        )

    def __repr__(self) -> str:
        return (f"BipartiteGraph(left_count={self.left_count}, right_count={self.right_count}, "
                f"edge_count={self.edge_count})")


@dataclass(frozen=True)
class GraphStats:
    """Summary statistics of a bipartite graph."""

    n: int
    m: int
    left_count: int
    right_count: int
    sum_deg_sq_left: int
    sum_deg_sq_right: int
    wedge_count: int
    max_degree: int

    def to_dict(self) -> dict:
        """Record form used on the command line (stable camelCase keys)."""
        return {
            'n': self.n,
            'left': self.left_count,
            'right': self.right_count,
            'm': self.m,
            'sumDegSqL': self.sum_deg_sq_left,
            'sumDegSqR': self.sum_deg_sq_right,
            'wedges': self.wedge_count,
            'maxDeg': self.max_degree,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'GraphStats':
        return cls(
            n=data.get('n', 0),
            m=data.get('m', 0),
            left_count=data.get('left', 0),
            right_count=data.get('right', 0),
            sum_deg_sq_left=data.get('sumDegSqL', 0),
            sum_deg_sq_right=data.get('sumDegSqR', 0),
            wedge_count=data.get('wedges', 0),
            max_degree=data.get('maxDeg', 0),
        )
