"""Wedge Index Model - Prefix sums over per-vertex wedge counts."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NoWedgesError


@dataclass(frozen=True, eq=False)
class WedgeIndex:
    """
    prefix[j] = sum of C(d_i, 2) for i <= j, over the global vertex order.

    A uniform r in [1, total_wedges] maps to the smallest j with
    prefix[j] >= r, which picks center j with probability C(d_j,2)/total.
    """
    prefix: np.ndarray
    total_wedges: int

    def __post_init__(self):
        self.prefix.flags.writeable = False

    @classmethod
    def from_degrees(cls, degrees: np.ndarray) -> 'WedgeIndex':
        degrees = np.asarray(degrees, dtype=np.int64)
        if degrees.size == 0:
            raise InvalidArgumentError("Cannot index an empty degree array")
        prefix = np.cumsum(degrees * (degrees - 1) // 2)
        return cls(prefix=prefix, total_wedges=int(prefix[-1]))

    def locate(self, r):
        """Center index for r in [1, total_wedges]; accepts scalars or arrays."""
        return np.searchsorted(self.prefix, r, side='left')

    def sample_centers(self, rng: np.random.Generator, size: int = 1) -> np.ndarray:
        if self.total_wedges < 1:
            raise NoWedgesError("Graph has no wedges to sample")
        return self.locate(rng.integers(1, self.total_wedges + 1, size=size))
