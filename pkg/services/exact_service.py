"""Exact Service - Global butterfly counting with degree-square side selection."""

import logging
from typing import Optional

import numpy as np

from models.errors import CountOverflowError
from models.exact_result import ExactCountResult, SideChoice
from models.graph import BipartiteGraph, Side, exact_square_sum

logger = logging.getLogger(__name__)

MAX_COUNT = 2 ** 64 - 1
MAX_DEGREE = 2 ** 31
# Counter updates handled per vectorized block of anchors.
BLOCK_WORK = 1 << 20


def choose_side(graph: BipartiteGraph) -> SideChoice:
    """Anchor on RIGHT when the left degree squares are strictly cheaper; ties stay LEFT."""
    cost_left = float(exact_square_sum(graph.left_degrees))
    cost_right = float(exact_square_sum(graph.right_degrees))
    chosen = Side.RIGHT if cost_left < cost_right else Side.LEFT
    logger.debug("Side choice: %s (cost_left=%g, cost_right=%g)", chosen.value, cost_left, cost_right)
    return SideChoice(chosen=chosen, cost_left=cost_left, cost_right=cost_right)


def _rank_in_opposite_list(graph: BipartiteGraph, side: Side) -> np.ndarray:
    """
    For every CSR slot (v, u) of `side`, the position of v inside the sorted Γ_u.

    That position is the number of w in Γ_u with w < v.
    """
    opp_indptr, opp_indices = graph.csr(side.opposite)
    opp_owner = np.repeat(np.arange(len(opp_indptr) - 1, dtype=np.int64), np.diff(opp_indptr))
    opp_rank = np.arange(opp_indices.size, dtype=np.int64) - opp_indptr[opp_owner]
    # Opposite slots sorted by (v, u) line up with this side's slots.
    order = np.lexsort((opp_owner, opp_indices))
    return opp_rank[order]


def _check_degrees(graph: BipartiteGraph) -> None:
    peak = int(graph.all_degrees.max())
    if peak >= MAX_DEGREE:
        raise CountOverflowError(f"Maximum degree {peak} exceeds the supported 2^31 bound")


def exact_count_detailed(graph: BipartiteGraph, iterate_over: Optional[Side] = None) -> ExactCountResult:
    """
    Count butterflies by distance-2 multiplicities from each anchor.

    For every anchor v on the iteration side, each u in Γ_v contributes one
    counter update per w in Γ_u with w before v in dense order. The counter
    of w then equals |Γ_v ∩ Γ_w| and every butterfly is counted once, at
    its later anchor, as C(count, 2). Anchors are processed in blocks whose
    counters are tallied with np.unique.
    """
    _check_degrees(graph)
    side = iterate_over if iterate_over is not None else choose_side(graph).chosen
    indptr, indices = graph.csr(side)
    opp_indptr, opp_indices = graph.csr(side.opposite)
    anchor_count = len(indptr) - 1

    rank = _rank_in_opposite_list(graph, side)
    opp_degrees = np.diff(opp_indptr)
    slot_anchor = np.repeat(np.arange(anchor_count, dtype=np.int64), np.diff(indptr))
    anchor_work = np.bincount(slot_anchor, weights=rank, minlength=anchor_count).astype(np.int64)
    work_prefix = np.concatenate(([0], np.cumsum(anchor_work)))

    total = 0
    updates = 0
    visited = 0
    first = 0
    while first < anchor_count:
        # Extend the block until its work reaches BLOCK_WORK (at least one anchor).
        last = int(np.searchsorted(work_prefix, work_prefix[first] + BLOCK_WORK, side='right')) - 1
        last = min(max(last, first + 1), anchor_count)
        lo, hi = indptr[first], indptr[last]
        counts = rank[lo:hi]
        block_work = int(counts.sum())
        visited += int(np.sum(opp_degrees[indices[lo:hi]] - 1))
        if block_work:
            starts = opp_indptr[indices[lo:hi]]
            offsets = np.repeat(starts - (np.cumsum(counts) - counts), counts)
            partners = opp_indices[offsets + np.arange(block_work, dtype=np.int64)]
            anchors = np.repeat(slot_anchor[lo:hi], counts)
            _, multiplicity = np.unique(anchors * anchor_count + partners, return_counts=True)
            multiplicity = multiplicity.astype(np.int64)
            total += int(np.sum(multiplicity * (multiplicity - 1) // 2))
            updates += block_work
            if total > MAX_COUNT:
                raise CountOverflowError("Butterfly count exceeds 2^64 - 1")
        first = last

    logger.debug("Exact count over %s: %d butterflies, %d counter updates", side.value, total, updates)
    return ExactCountResult(count=total, side=side, counter_updates=updates, triples_visited=visited)


def exact_count(graph: BipartiteGraph) -> int:
    """Number of butterflies in the graph, anchored on the cheaper side."""
    return exact_count_detailed(graph).count


def exact_count_side(graph: BipartiteGraph, iterate_over: Side) -> int:
    """Same count with the anchor side forced."""
    return exact_count_detailed(graph, iterate_over).count
