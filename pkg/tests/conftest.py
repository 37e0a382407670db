"""Shared fixtures: small named graphs and edge-list files."""

import pytest

from models.graph import BipartiteGraph
from services.config_service import reset_toolkit_config
from services.graph_service import complete_biclique

C6_EDGES = [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (1, 3)]
TWO_K22_EDGES = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 3), (3, 4), (4, 3), (4, 4)]


def graph_from_pairs(pairs) -> BipartiteGraph:
    lefts, rights = zip(*pairs)
    return BipartiteGraph.from_edges(lefts, rights)


@pytest.fixture(autouse=True)
def default_config(monkeypatch):
    """Every test starts from the repository config, never a user override."""
    monkeypatch.delenv('BFLY_CONFIG', raising=False)
    reset_toolkit_config()
    yield
    reset_toolkit_config()


@pytest.fixture
def k22():
    return complete_biclique(2, 2)


@pytest.fixture
def k32():
    return complete_biclique(3, 2)


@pytest.fixture
def k33():
    return complete_biclique(3, 3)


@pytest.fixture
def k24():
    return complete_biclique(2, 4)


@pytest.fixture
def star13():
    return complete_biclique(1, 3)


@pytest.fixture
def star15():
    return complete_biclique(1, 5)


@pytest.fixture
def single_edge():
    return complete_biclique(1, 1)


@pytest.fixture
def c6():
    return graph_from_pairs(C6_EDGES)


@pytest.fixture
def two_k22():
    return graph_from_pairs(TWO_K22_EDGES)


@pytest.fixture
def edge_file(tmp_path):
    """Write edge-list text to a file and return its path."""
    def write(text: str, name: str = 'graph.txt') -> str:
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return write
