"""Hypothesis strategies for small random bipartite graphs."""

import hypothesis.strategies as st

from models.errors import EmptyGraphError
from services.graph_service import random_bipartite

densities = st.sampled_from([0.2, 0.5, 0.8])
seeds = st.integers(min_value=0, max_value=2 ** 64 - 1)


@st.composite
def bipartite_graphs(draw, max_side: int = 12, min_side: int = 1):
    """random_bipartite instances; empty draws are retried with the next seed."""
    a = draw(st.integers(min_value=min_side, max_value=max_side))
    b = draw(st.integers(min_value=min_side, max_value=max_side))
    p = draw(densities)
    seed = draw(seeds)
    for offset in range(64):
        try:
            return random_bipartite(a, b, p, (seed + offset) % 2 ** 64)
        except EmptyGraphError:
            continue
    return random_bipartite(a, b, 1.0, seed)


def random_graph(a: int, b: int, p: float, seed: int):
    """First non-empty random_bipartite(a, b, p, s) for s = seed, seed + 1, ..."""
    while True:
        try:
            return random_bipartite(a, b, p, seed)
        except EmptyGraphError:
            seed += 1
