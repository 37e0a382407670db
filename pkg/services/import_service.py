"""Import Service - Handles edge-list parsing, normalization and serialization."""

import io
import logging
import os
import re
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Tuple, Union

import numpy as np

from models.errors import EmptyGraphError, GraphParseError
from models.graph import BipartiteGraph

logger = logging.getLogger(__name__)

MAX_EXTERNAL_ID = 2 ** 64 - 1
HEADER_LINE = "% bip"

_ID_PATTERN = re.compile(r"^[0-9]+$")


@dataclass
class ParseOptions:
    """How edge-list lines are read."""
    comment_prefixes: Tuple[str, ...] = ('%', '#')
    delimiter: Optional[str] = None       # None splits on any whitespace
    encoding: str = 'utf-8'


def _parse_id(token: str, line_number: int) -> int:
    if not _ID_PATTERN.match(token):
        raise GraphParseError(f"expected a non-negative integer id, got {token!r}", line_number, token)
    value = int(token)
    if value > MAX_EXTERNAL_ID:
        raise GraphParseError(f"id does not fit in 64 bits: {token}", line_number, token)
    return value


def _iter_lines(source: Union[IO[str], IO[bytes]], encoding: str) -> Iterable[Tuple[int, str]]:
    for line_number, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode(encoding)
            except UnicodeDecodeError as e:
                raise GraphParseError(f"cannot decode line as {encoding}: {e.reason}", line_number) from e
        yield line_number, raw


def load_edge_list(source: Union[IO[str], IO[bytes], str], options: Optional[ParseOptions] = None) -> BipartiteGraph:
    """
    Parse a two-column bipartite edge list into a normalized graph.

    Accepts a text or binary stream (or a string holding the whole file).
    Lines starting with a comment prefix and blank lines are skipped;
    tokens after the first two are ignored (KONECT weight and timestamp
    columns). Raises GraphParseError for a malformed id and
    EmptyGraphError when no edge remains.
    """
    options = options or ParseOptions()
    if isinstance(source, str):
        source = io.StringIO(source)

    lefts = []
    rights = []
    line_count = 0
    for line_number, line in _iter_lines(source, options.encoding):
        line_count = line_number
        stripped = line.strip()
        if not stripped or stripped.startswith(options.comment_prefixes):
            continue
        tokens = stripped.split(options.delimiter)
        if len(tokens) < 2:
            raise GraphParseError("expected at least two ids on the line", line_number, stripped)
        lefts.append(_parse_id(tokens[0].strip(), line_number))
        rights.append(_parse_id(tokens[1].strip(), line_number))

    if not lefts:
        raise EmptyGraphError("Edge list contains no edges")

    graph = BipartiteGraph.from_edges(np.array(lefts, dtype=np.uint64), np.array(rights, dtype=np.uint64))
    logger.info(
        "Loaded %d lines: %d edges kept of %d listed, |L|=%d, |R|=%d",
        line_count, graph.edge_count, len(lefts), graph.left_count, graph.right_count,
    )
    return graph


def load_edge_list_file(path: str, options: Optional[ParseOptions] = None) -> BipartiteGraph:
    """Open `path` in binary mode and parse it. OSError propagates."""
    with open(path, 'rb') as f:
        graph = load_edge_list(f, options)
    logger.debug("Parsed %s", os.path.abspath(path))
    return graph


def first_seen_edge_order(graph: BipartiteGraph) -> np.ndarray:
    """
    Permutation of edge indices whose listing reproduces the dense numbering.

    Reading the edges back in this order meets the left vertices in order
    0, 1, 2, ... and the right vertices likewise, so a reload rebuilds the
    same dense structure. Vertices are introduced greedily: a vertex can
    appear once it has a neighbor already introduced, or together with its
    counterpart through a shared edge.
    """
    left_first = graph.left_indices[graph.left_indptr[:-1]]
    right_first = graph.right_indices[graph.right_indptr[:-1]]
    left_time = np.empty(graph.left_count, dtype=np.int64)
    right_time = np.empty(graph.right_count, dtype=np.int64)

    next_left = next_right = tick = 0
    while next_left < graph.left_count or next_right < graph.right_count:
        if next_left < graph.left_count and left_first[next_left] < next_right:
            left_time[next_left] = tick
            next_left += 1
        elif next_right < graph.right_count and right_first[next_right] < next_left:
            right_time[next_right] = tick
            next_right += 1
        elif (next_left < graph.left_count and next_right < graph.right_count
              and left_first[next_left] == next_right):
            left_time[next_left] = right_time[next_right] = tick
            next_left += 1
            next_right += 1
        else:
            logger.debug("Dense numbering is not first-seen; falling back to left-major order")
            return np.arange(graph.edge_count)
        tick += 1

    key = np.maximum(left_time[graph.edge_left], right_time[graph.edge_right])
    return np.lexsort((graph.edge_right, graph.edge_left, key))


def serialize_edge_list(graph: BipartiteGraph) -> str:
    """Edge list text with a leading '% bip' comment and one 'left right' line per edge."""
    order = first_seen_edge_order(graph)
    lefts = graph.left_ids[graph.edge_left[order]]
    rights = graph.right_ids[graph.edge_right[order]]
    buffer = io.StringIO()
    buffer.write(HEADER_LINE + "\n")
    for left, right in zip(lefts.tolist(), rights.tolist()):
        buffer.write(f"{left} {right}\n")
    return buffer.getvalue()


def write_edge_list(graph: BipartiteGraph, path: str) -> str:
    """Write the serialized graph to `path`, creating parent folders; returns the path."""
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(serialize_edge_list(graph))
    logger.info("Wrote %d edges to %s", graph.edge_count, path)
    return path
