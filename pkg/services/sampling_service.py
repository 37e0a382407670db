"""Sampling Service - Local-sampling butterfly estimators and their combiner."""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from models.errors import InvalidArgumentError, NoWedgesError
from models.estimate import Estimate, EstimatorConfig, IterationPlan, SamplingMethod, TracePoint
from models.graph import BipartiteGraph, Side, VertexRef
from models.wedge_index import WedgeIndex
from services.local_service import count_per_edge, count_per_vertex, edge_endpoints
from services.rng_service import StreamTag, derived_generator

logger = logging.getLogger(__name__)


# ============ PER-SAMPLE VALUES ============
# One function per estimator mapping a concrete sample to the value the
# iteration returns. The exhaustive sample spaces of the oracle reuse them.

def vsamp_value(graph: BipartiteGraph, global_index: int) -> float:
    """bfly_v * n / 4 for the vertex at a global index."""
    vertex = graph.vertex_at(global_index)
    return count_per_vertex(graph, vertex) * graph.vertex_count / 4.0


def esamp_value(graph: BipartiteGraph, edge_index: int) -> float:
    """bfly_e * m / 4 for the edge at an edge index."""
    left, right = graph.edge_at(edge_index)
    return count_per_edge(graph, left, right) * graph.edge_count / 4.0


def wedge_closures(graph: BipartiteGraph, center: VertexRef, first: int, second: int) -> int:
    """|Γ_v ∩ Γ_w| - 1 for the wedge v-center-w given by two positions in Γ_center."""
    neighbors = graph.neighbors(center)
    ends_side = center.side.opposite
    v = VertexRef(ends_side, int(neighbors[first]))
    w = VertexRef(ends_side, int(neighbors[second]))
    shared = np.intersect1d(graph.neighbors(v), graph.neighbors(w), assume_unique=True)
    return int(shared.size) - 1


def wsamp_value(graph: BipartiteGraph, total_wedges: int, center_global: int, first: int, second: int) -> float:
    center = graph.vertex_at(center_global)
    return wedge_closures(graph, center, first, second) * total_wedges / 4.0


def fast_ebfc_trial_values(graph: BipartiteGraph, left: int, right: int,
                           w_choice: np.ndarray, x_choice: np.ndarray) -> np.ndarray:
    """
    Trial values of the per-edge estimator for edge (left, right).

    w_choice indexes Γ_left without `right`, x_choice indexes Γ_right
    without `left`. A trial is worth (d_left - 1)(d_right - 1) when
    (x, w) closes a butterfly and 0 otherwise.
    """
    left_ref = VertexRef(Side.LEFT, left)
    right_ref = VertexRef(Side.RIGHT, right)
    ws = graph.neighbors(left_ref)
    ws = ws[ws != right]
    xs = graph.neighbors(right_ref)
    xs = xs[xs != left]
    closes = graph.has_edges(xs[np.asarray(x_choice)], ws[np.asarray(w_choice)])
    return closes.astype(np.float64) * float(ws.size * xs.size)


# ============ ITERATIONS ============

def vsamp_iteration(graph: BipartiteGraph, rng: np.random.Generator) -> float:
    """Uniform vertex over both sides."""
    return vsamp_value(graph, int(rng.integers(graph.vertex_count)))


def esamp_iteration(graph: BipartiteGraph, rng: np.random.Generator) -> float:
    """Uniform edge, exact per-edge count."""
    return esamp_value(graph, int(rng.integers(graph.edge_count)))


def build_wedge_index(graph: BipartiteGraph) -> WedgeIndex:
    """Prefix sums of C(d, 2) over the global vertex order."""
    return WedgeIndex.from_degrees(graph.all_degrees)


def wsamp_iteration(graph: BipartiteGraph, index: WedgeIndex, rng: np.random.Generator) -> float:
    """Uniform wedge: center by prefix binary search, then an unordered pair of its neighbors."""
    if index.total_wedges < 1:
        raise NoWedgesError("Graph has no wedges to sample")
    center = int(index.sample_centers(rng, 1)[0])
    degree = int(graph.all_degrees[center])
    first, second = rng.choice(degree, size=2, replace=False)
    return wsamp_value(graph, index.total_wedges, center, int(first), int(second))


def fast_ebfc_estimate(graph: BipartiteGraph, u: VertexRef, v: VertexRef,
                       rng: np.random.Generator, repeats: int) -> float:
    """
    Unbiased estimate of bfly_e from `repeats` random (w, x) closure tests.

    Returns 0 without sampling when either endpoint has degree one.
    """
    if repeats < 1:
        raise InvalidArgumentError(f"repeats must be >= 1: {repeats}")
    left, right = edge_endpoints(graph, u, v)
    other_w = int(graph.left_degrees[left]) - 1
    other_x = int(graph.right_degrees[right]) - 1
    if other_w == 0 or other_x == 0:
        return 0.0
    w_choice = rng.integers(other_w, size=repeats)
    x_choice = rng.integers(other_x, size=repeats)
    return float(np.mean(fast_ebfc_trial_values(graph, left, right, w_choice, x_choice)))


def fast_esamp_iteration(graph: BipartiteGraph, rng: np.random.Generator, repeats: int) -> float:
    """Uniform edge, per-edge count estimated from `repeats` closure tests."""
    left, right = graph.edge_at(int(rng.integers(graph.edge_count)))
    return fast_ebfc_estimate(graph, left, right, rng, repeats) * graph.edge_count / 4.0


# ============ COMBINER ============

def _iteration_function(graph: BipartiteGraph, cfg: EstimatorConfig) -> Callable[[np.random.Generator], float]:
    if cfg.method == SamplingMethod.VERTEX:
        return lambda rng: vsamp_iteration(graph, rng)
    if cfg.method == SamplingMethod.EDGE:
        return lambda rng: esamp_iteration(graph, rng)
    if cfg.method == SamplingMethod.FAST_EDGE:
        repeats = cfg.fast_edge_repeats
        return lambda rng: fast_esamp_iteration(graph, rng, repeats)
    index = build_wedge_index(graph)
    if index.total_wedges < 1:
        raise NoWedgesError("Graph has no wedges to sample")
    return lambda rng: wsamp_iteration(graph, index, rng)


def combine(values: np.ndarray, groups: int) -> Tuple[float, List[float]]:
    """Plain mean for one group, otherwise the median of contiguous group means."""
    if groups <= 1:
        return float(np.mean(values)), []
    if values.size < groups:
        logger.warning("Only %d values for %d groups; reporting the plain mean instead of the median of means",
                       values.size, groups)
        return float(np.mean(values)), []
    means = [float(np.mean(chunk)) for chunk in np.array_split(values, groups)]
    return float(np.median(means)), means


def _checkpoints(done: int) -> List[int]:
    points = []
    k = 1
    while k <= done:
        points.append(k)
        k *= 2
    if points and points[-1] != done:
        points.append(done)
    return points


def run_estimator(graph: BipartiteGraph, cfg: EstimatorConfig) -> Estimate:
    """
    Run `cfg.method` and combine the per-iteration values.

    Iteration i draws from its own stream derived from (seed, i), and
    values are kept by iteration index, so the result does not depend on
    the number of threads. Work proceeds in blocks of
    cfg.clock_check_interval iterations; in time-budget mode the clock is
    read between blocks.
    """
    iterate = _iteration_function(graph, cfg)
    block = cfg.clock_check_interval
    cap = cfg.total_iterations
    logger.info("Starting %s estimator (cap=%s, budget=%s, seed=%d, threads=%d)",
                cfg.method.value, cap, cfg.time_budget, cfg.seed, cfg.threads)

    start = time.perf_counter()

    def run_block(first: int) -> Tuple[np.ndarray, float]:
        last = first + block if cap is None else min(first + block, cap)
        values = np.fromiter(
            (iterate(derived_generator(cfg.seed, StreamTag.ITERATION, i)) for i in range(first, last)),
            dtype=np.float64, count=last - first,
        )
        return values, time.perf_counter() - start

    results: List[Tuple[np.ndarray, float]] = []
    wave = cfg.threads
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        first = 0
        while cap is None or first < cap:
            firsts = [f for f in range(first, first + wave * block, block) if cap is None or f < cap]
            if cfg.threads == 1:
                results.extend(run_block(f) for f in firsts)
            else:
                results.extend(pool.map(run_block, firsts))
            first = firsts[-1] + block
            if cfg.is_timed and time.perf_counter() - start >= cfg.time_budget:
                break

    elapsed = time.perf_counter() - start
    values = np.concatenate([chunk for chunk, _ in results])
    value, group_means = combine(values, cfg.groups)

    trace: List[TracePoint] = []
    if cfg.trace:
        finished = np.maximum.accumulate(np.array([stamp for _, stamp in results]))
        running = np.cumsum(values) / np.arange(1, values.size + 1)
        for k in _checkpoints(values.size):
            trace.append(TracePoint(iterations=k,
                                    elapsed_seconds=float(finished[(k - 1) // block]),
                                    estimate=float(running[k - 1])))

    logger.info("Finished %s estimator: %d iterations in %.3fs, estimate %.6g",
                cfg.method.value, values.size, elapsed, value)
    return Estimate(value=value, iterations_done=int(values.size), elapsed=elapsed, seed=cfg.seed,
                    method=cfg.method.value, per_group_means=group_means, trace=trace)


# ============ PLANNING ============

def plan_iterations(graph: BipartiteGraph, method: SamplingMethod, epsilon: float, delta: float,
                    pilot_bfly: float, pair_count: float = 0.0) -> IterationPlan:
    """
    Group count and group size for an (epsilon, delta) guarantee.

    t = ceil(8 ln(1/delta)) rounded up to odd; each group mean of
    alpha = ceil(8 S / (eps^2 b) * (1 + P / b)) iterations misses by more
    than eps*b with probability at most 1/32, where S is n, m or the wedge
    count and P the matching pair count (p_V, p_E, p_1w). The unknown
    butterfly count b is replaced by `pilot_bfly`.
    """
    if not epsilon > 0:
        raise InvalidArgumentError(f"epsilon must be > 0: {epsilon}")
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must lie in (0, 1): {delta}")
    if not pilot_bfly > 0:
        raise InvalidArgumentError("A positive pilot butterfly count is required")

    groups = max(1, math.ceil(8 * math.log(1 / delta)))
    if groups % 2 == 0:
        groups += 1

    method = SamplingMethod.parse(method)
    if method == SamplingMethod.VERTEX:
        scale = graph.vertex_count
    elif method == SamplingMethod.WEDGE:
        scale = int(build_wedge_index(graph).total_wedges)
    else:
        scale = graph.edge_count
    size = math.ceil(8 * scale / (epsilon ** 2 * pilot_bfly) * (1 + pair_count / pilot_bfly))
    return IterationPlan(groups=groups, group_size=max(1, size))


def plan_fast_edge_repeats(degree_u: int, degree_v: int, epsilon: float, edge_bfly: float) -> int:
    """Closure tests per edge so one edge estimate is within eps*bfly_e w.p. >= 31/32."""
    if not epsilon > 0 or not edge_bfly > 0:
        raise InvalidArgumentError("epsilon and the per-edge butterfly count must be positive")
    return max(1, math.ceil(32 * degree_u * degree_v / (epsilon ** 2 * edge_bfly)))


def full_pass_mean(graph: BipartiteGraph, method: SamplingMethod) -> float:
    """Mean of the per-sample value over every vertex, edge or wedge, without sampling."""
    if method == SamplingMethod.VERTEX:
        values: Sequence[float] = [vsamp_value(graph, i) for i in range(graph.vertex_count)]
    elif method == SamplingMethod.EDGE:
        values = [esamp_value(graph, k) for k in range(graph.edge_count)]
    elif method == SamplingMethod.WEDGE:
        total = build_wedge_index(graph).total_wedges
        if total < 1:
            raise NoWedgesError("Graph has no wedges to sample")
        values = [
            wsamp_value(graph, total, center, i, j)
            for center, degree in enumerate(graph.all_degrees.tolist())
            for i in range(degree) for j in range(i + 1, degree)
        ]
    else:
        raise InvalidArgumentError(f"No deterministic full pass for {method.value}")
    return float(np.mean(values))
