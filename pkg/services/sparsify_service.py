"""Sparsify Service - One-shot edge and color sparsification estimators."""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from models.errors import InvalidArgumentError
from models.estimate import Estimate
from models.graph import BipartiteGraph
from models.sparsify_config import SparsifyConfig, SparsifyMethod, validate_colors, validate_probability
from services.config_service import get_toolkit_config
from services.exact_service import exact_count
from services.rng_service import StreamTag, derived_generator, trial_seed

logger = logging.getLogger(__name__)


def sparsified_count(graph: BipartiteGraph, keep: np.ndarray) -> int:
    """Exact butterfly count of the subgraph on the kept edges (0 when nothing is kept)."""
    if not keep.any():
        return 0
    if keep.all():
        return exact_count(graph)
    return exact_count(graph.subgraph(keep))


def edge_coins(graph: BipartiteGraph, p: float, seed: int) -> np.ndarray:
    """Keep mask over edge indices, one independent coin per edge."""
    rng = derived_generator(seed, StreamTag.EDGE_COINS)
    return rng.random(graph.edge_count) < p


def vertex_colors(graph: BipartiteGraph, colors: int, seed: int) -> np.ndarray:
    """One color in [0, colors) per vertex, in global vertex order (left first)."""
    rng = derived_generator(seed, StreamTag.COLORS)
    return rng.integers(colors, size=graph.vertex_count)


def monochromatic_edges(graph: BipartiteGraph, palette: np.ndarray) -> np.ndarray:
    left_colors = palette[:graph.left_count]
    right_colors = palette[graph.left_count:]
    return left_colors[graph.edge_left] == right_colors[graph.edge_right]


def suggest_p(graph: BipartiteGraph, pilot_bfly: float,
              method: SparsifyMethod = SparsifyMethod.EDGE) -> float:
    """
    Smallest retention probability for which the variance guarantee holds.

    Edge: max((c/b)^(1/4), sqrt(c*D/b), c*D^2/b) with c = 24.
    Color: max((c/b)^(1/3), sqrt(c*D/b), c*D^2/b) with c = 32.
    b is a pilot butterfly count and D the maximum degree. Capped at 1.
    """
    if not pilot_bfly > 0:
        raise InvalidArgumentError("A positive pilot butterfly count is required")
    settings = get_toolkit_config().sparsify
    method = SparsifyMethod.parse(method)
    max_degree = float(max(graph.left_degrees.max(), graph.right_degrees.max()))
    if method == SparsifyMethod.EDGE:
        c = settings.edge_threshold_constant
        root = (c / pilot_bfly) ** 0.25
    else:
        c = settings.color_threshold_constant
        root = (c / pilot_bfly) ** (1.0 / 3.0)
    threshold = max(root, math.sqrt(c * max_degree / pilot_bfly), c * max_degree ** 2 / pilot_bfly)
    return min(1.0, threshold)


def edge_sparsify_estimate(graph: BipartiteGraph, p: float, seed: int,
                           pilot_bfly: Optional[float] = None) -> float:
    """
    Keep each edge with probability p, count exactly, scale by p^-4.

    p = 1 returns the exact count. With a pilot count, a warning is logged
    when p does not exceed the suggested threshold.
    """
    p = validate_probability(p)
    if pilot_bfly is not None and pilot_bfly > 0:
        threshold = suggest_p(graph, pilot_bfly, SparsifyMethod.EDGE)
        if p <= threshold:
            logger.warning("p=%g is at or below the suggested threshold %.4g; variance may be large",
                           p, threshold)
    elif p < 1.0:
        logger.info("No pilot count given; retention threshold not checked for p=%g", p)
    if p == 1.0:
        return float(exact_count(graph))
    return sparsified_count(graph, edge_coins(graph, p, seed)) / p ** 4


def color_sparsify_estimate(graph: BipartiteGraph, colors: int, seed: int,
                            pilot_bfly: Optional[float] = None) -> float:
    """
    Color all vertices from one palette of N colors, keep monochromatic edges, scale by N^3.

    N = 1 returns the exact count.
    """
    colors = validate_colors(colors)
    if pilot_bfly is not None and pilot_bfly > 0:
        threshold = suggest_p(graph, pilot_bfly, SparsifyMethod.COLOR)
        if 1.0 / colors <= threshold:
            logger.warning("1/N=%g is at or below the suggested threshold %.4g; variance may be large",
                           1.0 / colors, threshold)
    if colors == 1:
        return float(exact_count(graph))
    keep = monochromatic_edges(graph, vertex_colors(graph, colors, seed))
    return float(sparsified_count(graph, keep) * colors ** 3)


def sparsify_run(graph: BipartiteGraph, cfg: SparsifyConfig,
                 pilot_bfly: Optional[float] = None) -> Estimate:
    """Mean of `trials` independent sparsifications; trial i uses a seed derived from (seed, i)."""
    seeds = [trial_seed(cfg.seed, i) for i in range(cfg.trials)]
    if cfg.method == SparsifyMethod.EDGE:
        def one_trial(s: int) -> float:
            return edge_sparsify_estimate(graph, cfg.p, s, pilot_bfly)
    else:
        def one_trial(s: int) -> float:
            return color_sparsify_estimate(graph, cfg.colors, s, pilot_bfly)

    logger.info("Starting %s sparsification: %d trials, p=%g", cfg.method.value, cfg.trials, cfg.probability)
    start = time.perf_counter()
    if cfg.threads == 1:
        values = [one_trial(s) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            values = list(pool.map(one_trial, seeds))
    elapsed = time.perf_counter() - start

    value = float(np.mean(values))
    logger.info("Finished %s sparsification in %.3fs, estimate %.6g", cfg.method.value, elapsed, value)
    return Estimate(value=value, iterations_done=cfg.trials, elapsed=elapsed, seed=cfg.seed,
                    method=cfg.method.value, trial_values=[float(v) for v in values])
