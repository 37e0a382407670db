"""Butterfly Models - Canonical butterflies and butterfly-pair type counts."""

from dataclasses import dataclass
from typing import FrozenSet, Tuple, Union

from .errors import InvalidArgumentError
from .graph import VertexRef


@dataclass(frozen=True)
class LocalCount:
    """Butterflies through one vertex or one edge."""
    subject: Union[VertexRef, Tuple[VertexRef, VertexRef]]
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise InvalidArgumentError(f"Local count cannot be negative: {self.count}")

    @property
    def is_edge(self) -> bool:
        return isinstance(self.subject, tuple)

    def to_dict(self) -> dict:
        if self.is_edge:
            return {'edge': [str(end) for end in self.subject], 'count': self.count}
        return {'vertex': str(self.subject), 'count': self.count}


@dataclass(frozen=True, order=True)
class Butterfly:
    """
    A 2x2 biclique given by two left and two right dense indices.

    Both pairs are stored sorted, so equal butterflies compare equal.
    """
    left_pair: Tuple[int, int]
    right_pair: Tuple[int, int]

    def __post_init__(self):
        for pair in (self.left_pair, self.right_pair):
            if len(pair) != 2 or not pair[0] < pair[1]:
                raise InvalidArgumentError(f"Butterfly pairs must be sorted and distinct: {pair}")

    @classmethod
    def of(cls, a: int, b: int, x: int, y: int) -> 'Butterfly':
        return cls(tuple(sorted((int(a), int(b)))), tuple(sorted((int(x), int(y)))))

    def edges(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset((l, r) for l in self.left_pair for r in self.right_pair)

    def to_dict(self) -> dict:
        return {'left': list(self.left_pair), 'right': list(self.right_pair)}


@dataclass(frozen=True)
class PairTypeCounts:
    """
    Unordered pairs of distinct butterflies, by what the two share.

    0v nothing; 1v one vertex; 2v two vertices and no edge; 1e one edge;
    1w a wedge (three vertices, two edges).
    """
    p_0v: int = 0
    p_1v: int = 0
    p_2v: int = 0
    p_1e: int = 0
    p_1w: int = 0

    @property
    def p_V(self) -> int:
        """Pairs sharing at least one vertex."""
        return self.p_1v + self.p_2v + self.p_1e + self.p_1w

    @property
    def p_E(self) -> int:
        """Pairs sharing at least one edge."""
        return self.p_1e + self.p_1w

    @property
    def total(self) -> int:
        return self.p_0v + self.p_V

    def to_dict(self) -> dict:
        return {
            'p0v': self.p_0v,
            'p1v': self.p_1v,
            'p2v': self.p_2v,
            'p1e': self.p_1e,
            'p1w': self.p_1w,
            'pV': self.p_V,
            'pE': self.p_E,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'PairTypeCounts':
        return cls(
            p_0v=int(data.get('p0v', 0)),
            p_1v=int(data.get('p1v', 0)),
            p_2v=int(data.get('p2v', 0)),
            p_1e=int(data.get('p1e', 0)),
            p_1w=int(data.get('p1w', 0)),
        )
