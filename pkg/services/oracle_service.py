"""Oracle Service - Brute-force butterfly ground truth for desk-scale graphs."""

import logging
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from models.butterfly import Butterfly, PairTypeCounts
from models.errors import InvalidArgumentError, OracleGuardError, PairClassificationError
from models.graph import BipartiteGraph, Side, VertexRef
from models.sparsify_config import validate_colors, validate_probability
from models.variance import SampleSpace, SampleSpaceKind, VarianceBounds
from services.config_service import get_toolkit_config
from services.sampling_service import (
    build_wedge_index,
    esamp_value,
    fast_ebfc_trial_values,
    vsamp_value,
    wsamp_value,
)

logger = logging.getLogger(__name__)

MAX_SPARSIFY_EDGES = 20
MAX_COLORINGS = 20_000_000
_COLORING_CELLS = 1 << 22

# (shared vertices, shared edges) -> PairTypeCounts field
_PAIR_TYPES = {
    (0, 0): 'p_0v',
    (1, 0): 'p_1v',
    (2, 0): 'p_2v',
    (2, 1): 'p_1e',
    (3, 2): 'p_1w',
}


def _check_side_guard(graph: BipartiteGraph, max_side_vertices: Optional[int]) -> None:
    limit = max_side_vertices if max_side_vertices is not None else get_toolkit_config().oracle.max_side_vertices
    if graph.left_count > limit or graph.right_count > limit:
        logger.warning("Oracle refused a %dx%d graph (limit %d per side)",
                       graph.left_count, graph.right_count, limit)
        raise OracleGuardError(
            f"Graph has {graph.left_count}x{graph.right_count} vertices; the oracle accepts at most "
            f"{limit} per side (pass --max-side or set oracle.maxSideVertices to override)"
        )


def _common_right(graph: BipartiteGraph, a: int, b: int) -> np.ndarray:
    return np.intersect1d(graph.neighbors(VertexRef(Side.LEFT, a)),
                          graph.neighbors(VertexRef(Side.LEFT, b)), assume_unique=True)


def enumerate_butterflies(graph: BipartiteGraph, max_side_vertices: Optional[int] = None) -> List[Butterfly]:
    """Every butterfly once, in sorted canonical order."""
    _check_side_guard(graph, max_side_vertices)
    found = []
    for a, b in combinations(range(graph.left_count), 2):
        for x, y in combinations(_common_right(graph, a, b).tolist(), 2):
            found.append(Butterfly((a, b), (x, y)))
    return found


def brute_force_count(graph: BipartiteGraph, max_side_vertices: Optional[int] = None) -> int:
    """Sum over left pairs of C(common neighbors, 2)."""
    _check_side_guard(graph, max_side_vertices)
    total = 0
    for a, b in combinations(range(graph.left_count), 2):
        shared = int(_common_right(graph, a, b).size)
        total += shared * (shared - 1) // 2
    return total


def _butterfly_arrays(butterflies: List[Butterfly]) -> Tuple[np.ndarray, np.ndarray]:
    lefts = np.array([bf.left_pair for bf in butterflies], dtype=np.int64).reshape(-1, 2)
    rights = np.array([bf.right_pair for bf in butterflies], dtype=np.int64).reshape(-1, 2)
    return lefts, rights


def _pair_overlap(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Size of the intersection of two-element rows (elements within a row are distinct)."""
    return ((first[:, 0] == second[:, 0]).astype(np.int64) + (first[:, 0] == second[:, 1])
            + (first[:, 1] == second[:, 0]) + (first[:, 1] == second[:, 1]))


def classify_pairs(graph: BipartiteGraph, max_side_vertices: Optional[int] = None,
                   max_butterflies: Optional[int] = None) -> PairTypeCounts:
    """
    Count unordered butterfly pairs by sharing type.

    Shared vertices are |left ∩ left'| + |right ∩ right'|; since both are
    bicliques, the shared edges are exactly the product of the two.
    """
    butterflies = enumerate_butterflies(graph, max_side_vertices)
    limit = max_butterflies if max_butterflies is not None else get_toolkit_config().oracle.max_butterflies_for_pairs
    if len(butterflies) > limit:
        logger.warning("Oracle refused pair classification of %d butterflies (limit %d)", len(butterflies), limit)
        raise OracleGuardError(
            f"Graph has {len(butterflies)} butterflies; pair classification accepts at most {limit} "
            f"(pass --max-butterflies or set oracle.maxButterfliesForPairs to override)"
        )
    if len(butterflies) < 2:
        return PairTypeCounts()

    lefts, rights = _butterfly_arrays(butterflies)
    i, j = np.triu_indices(len(butterflies), k=1)
    shared_left = _pair_overlap(lefts[i], lefts[j])
    shared_right = _pair_overlap(rights[i], rights[j])
    shared_vertices = shared_left + shared_right
    shared_edges = shared_left * shared_right

    counts: Dict[str, int] = {name: 0 for name in _PAIR_TYPES.values()}
    classified = 0
    for (vertices, edges), name in _PAIR_TYPES.items():
        hits = int(np.count_nonzero((shared_vertices == vertices) & (shared_edges == edges)))
        counts[name] = hits
        classified += hits
    if classified != i.size:
        bad = np.flatnonzero(~np.isin(shared_vertices * 10 + shared_edges,
                                      [v * 10 + e for v, e in _PAIR_TYPES]))[0]
        raise PairClassificationError(
            f"Butterflies {butterflies[i[bad]]} and {butterflies[j[bad]]} share "
            f"{shared_vertices[bad]} vertices and {shared_edges[bad]} edges"
        )
    return PairTypeCounts(**counts)


# ============ VARIANCE BOUNDS ============

def variance_bounds(graph: BipartiteGraph, counts: PairTypeCounts, butterflies: int,
                    p: Optional[float] = None) -> VarianceBounds:
    """
    Per-iteration variance upper bounds.

    Local samplers: n(b+p_V)/4, m(b+p_E)/4, W(b+p_1w)/4 with W the wedge
    count. With p, the edge sparsifier bound b/p^4 + 2p_1w/p^2 + 2p_1e/p
    and the color sparsifier bound b/p^3 + 2p_1w/p^2 + 2(p_1e+p_2v)/p.
    """
    b = float(butterflies)
    wedges = build_wedge_index(graph).total_wedges
    bounds = dict(
        vertex=graph.vertex_count * (b + counts.p_V) / 4.0,
        edge=graph.edge_count * (b + counts.p_E) / 4.0,
        wedge=wedges * (b + counts.p_1w) / 4.0,
    )
    if p is not None:
        p = validate_probability(p)
        bounds.update(
            probability=p,
            edge_sparsify=b / p ** 4 + 2 * counts.p_1w / p ** 2 + 2 * counts.p_1e / p,
            color_sparsify=b / p ** 3 + 2 * counts.p_1w / p ** 2 + 2 * (counts.p_1e + counts.p_2v) / p,
            edge_sparsify_printed=b / p ** 4 + counts.p_1w / p ** 2 + counts.p_1e / p,
            color_sparsify_printed=b / p ** 3 + counts.p_1w / p ** 2 + (counts.p_1e + counts.p_2v) / p,
        )
    return VarianceBounds(**bounds)


def edge_sparsify_variance(butterflies: int, counts: PairTypeCounts, p: float) -> float:
    """Exact variance of one edge-sparsification estimate."""
    p = validate_probability(p)
    raw = (butterflies * (p ** 4 - p ** 8) + 2 * counts.p_1e * (p ** 7 - p ** 8)
           + 2 * counts.p_1w * (p ** 6 - p ** 8))
    return raw / p ** 8


def color_sparsify_variance(butterflies: int, counts: PairTypeCounts, colors: int) -> float:
    """Exact variance of one color-sparsification estimate."""
    p = 1.0 / validate_colors(colors)
    raw = (butterflies * (p ** 3 - p ** 6) + 2 * (counts.p_1e + counts.p_2v) * (p ** 5 - p ** 6)
           + 2 * counts.p_1w * (p ** 4 - p ** 6))
    return raw / p ** 6


def observation_limits(graph: BipartiteGraph, butterflies: int) -> Dict[str, int]:
    """Upper limits on p_2v, p_1e and p_1w in terms of the count and maximum degree."""
    delta = int(graph.all_degrees.max())
    return {
        'p2v': butterflies * delta ** 2,
        'p1e': 2 * butterflies * delta ** 2,
        'p1w': 2 * butterflies * delta,
    }


def satisfies_observation(graph: BipartiteGraph, butterflies: int, counts: PairTypeCounts) -> bool:
    limits = observation_limits(graph, butterflies)
    return counts.p_2v <= limits['p2v'] and counts.p_1e <= limits['p1e'] and counts.p_1w <= limits['p1w']


# ============ EXHAUSTIVE SAMPLE SPACES ============

def _butterfly_edge_masks(graph: BipartiteGraph, butterflies: List[Butterfly]) -> np.ndarray:
    masks = []
    for bf in butterflies:
        mask = 0
        for left, right in bf.edges():
            mask |= 1 << graph.edge_index(left, right)
        masks.append(mask)
    return np.array(masks, dtype=np.int64)


def _edge_sparsify_space(graph: BipartiteGraph, p: float) -> SampleSpace:
    p = validate_probability(p)
    m = graph.edge_count
    if m > MAX_SPARSIFY_EDGES:
        raise OracleGuardError(f"Edge-subset enumeration needs m <= {MAX_SPARSIFY_EDGES}, got {m}")
    subsets = np.arange(1 << m, dtype=np.int64)
    kept = np.zeros(subsets.size, dtype=np.int64)
    for bit in range(m):
        kept += (subsets >> bit) & 1
    surviving = np.zeros(subsets.size, dtype=np.int64)
    for mask in _butterfly_edge_masks(graph, enumerate_butterflies(graph)):
        surviving += (subsets & mask) == mask
    weights = p ** kept * (1.0 - p) ** (m - kept)
    return SampleSpace(surviving / p ** 4, weights, SampleSpaceKind.EDGE_SPARSIFY.value)


def _color_sparsify_space(graph: BipartiteGraph, colors: int) -> SampleSpace:
    colors = validate_colors(colors)
    n = graph.vertex_count
    total = colors ** n
    if total > MAX_COLORINGS:
        raise OracleGuardError(f"{colors}^{n} colorings exceed the enumeration limit {MAX_COLORINGS}")
    butterflies = enumerate_butterflies(graph)
    lefts, rights = _butterfly_arrays(butterflies)
    corners = np.concatenate([lefts, rights + graph.left_count], axis=1)
    place = colors ** np.arange(n, dtype=np.int64)

    values = np.empty(total, dtype=np.float64)
    chunk = max(1, _COLORING_CELLS // max(n, corners.size))
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
        palette = (ids[:, None] // place[None, :]) % colors
        if corners.size:
            corner_colors = palette[:, corners]
            mono = np.all(corner_colors == corner_colors[:, :, :1], axis=2).sum(axis=1)
        else:
            mono = np.zeros(ids.size, dtype=np.int64)
        values[start:start + ids.size] = mono * float(colors ** 3)
    return SampleSpace(values, np.full(total, 1.0 / total), SampleSpaceKind.COLOR_SPARSIFY.value)


def _fast_edge_trial_space(graph: BipartiteGraph, edge_index: int) -> Tuple[np.ndarray, np.ndarray]:
    left_ref, right_ref = graph.edge_at(edge_index)
    other_w = graph.degree(left_ref) - 1
    other_x = graph.degree(right_ref) - 1
    if other_w == 0 or other_x == 0:
        return np.zeros(1), np.ones(1)
    w_choice, x_choice = np.meshgrid(np.arange(other_w), np.arange(other_x), indexing='ij')
    values = fast_ebfc_trial_values(graph, left_ref.index, right_ref.index, w_choice.ravel(), x_choice.ravel())
    return values, np.full(values.size, 1.0 / values.size)


def sample_space(graph: BipartiteGraph, kind: SampleSpaceKind, *, p: Optional[float] = None,
                 colors: Optional[int] = None, edge_index: Optional[int] = None) -> SampleSpace:
    """
    Exact distribution of one estimator iteration.

    Values come from the same per-sample value functions the estimators
    use; weights are the probabilities of drawing each sample.
    """
    kind = SampleSpaceKind(kind)
    if kind == SampleSpaceKind.VERTEX:
        return SampleSpace.uniform([vsamp_value(graph, i) for i in range(graph.vertex_count)], kind.value)
    if kind == SampleSpaceKind.EDGE:
        return SampleSpace.uniform([esamp_value(graph, k) for k in range(graph.edge_count)], kind.value)
    if kind == SampleSpaceKind.WEDGE:
        total = build_wedge_index(graph).total_wedges
        values = [
            wsamp_value(graph, total, center, i, j)
            for center, degree in enumerate(graph.all_degrees.tolist())
            for i in range(degree) for j in range(i + 1, degree)
        ]
        if not values:
            raise InvalidArgumentError("Graph has no wedges")
        return SampleSpace.uniform(values, kind.value)
    if kind == SampleSpaceKind.FAST_EDGE_TRIAL:
        if edge_index is None:
            raise InvalidArgumentError("The per-edge trial space needs an edge index")
        values, weights = _fast_edge_trial_space(graph, edge_index)
        return SampleSpace(values, weights, kind.value)
    if kind == SampleSpaceKind.FAST_EDGE:
        m = graph.edge_count
        parts = [_fast_edge_trial_space(graph, k) for k in range(m)]
        values = np.concatenate([v * m / 4.0 for v, _ in parts])
        weights = np.concatenate([w / m for _, w in parts])
        return SampleSpace(values, weights, kind.value)
    if kind == SampleSpaceKind.EDGE_SPARSIFY:
        if p is None:
            raise InvalidArgumentError("Edge sparsification space needs p")
        return _edge_sparsify_space(graph, p)
    if colors is None:
        raise InvalidArgumentError("Color sparsification space needs a number of colors")
    return _color_sparsify_space(graph, colors)
