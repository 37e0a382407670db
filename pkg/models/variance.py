"""Variance Models - Theoretical variance bounds and exact sample spaces."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

import numpy as np

from .errors import InvalidArgumentError


class SampleSpaceKind(str, Enum):
    """Which single-iteration distribution to enumerate."""
    VERTEX = "vertex"
    EDGE = "edge"
    WEDGE = "wedge"
    FAST_EDGE = "fast-edge"                  # uniform edge, one closure test
    FAST_EDGE_TRIAL = "fast-edge-trial"      # one closure test on a fixed edge
    EDGE_SPARSIFY = "edge-sparsify"
    COLOR_SPARSIFY = "color-sparsify"


def _sqrt(value: Optional[float]) -> Optional[float]:
    return None if value is None else math.sqrt(value)


@dataclass(frozen=True)
class VarianceBounds:
    """
    Per-iteration variance upper bounds of each estimator.

    The sparsifier entries are only present when a retention probability
    was supplied. `*_printed` keep the single-count pair terms, which are
    not always valid bounds; the unsuffixed values count each pair in both
    orders.
    """
    vertex: float
    edge: float
    wedge: float
    probability: Optional[float] = None
    edge_sparsify: Optional[float] = None
    color_sparsify: Optional[float] = None
    edge_sparsify_printed: Optional[float] = None
    color_sparsify_printed: Optional[float] = None

    def standard_deviations(self) -> Dict[str, Optional[float]]:
        return {
            'vsamp': _sqrt(self.vertex),
            'esamp': _sqrt(self.edge),
            'wsamp': _sqrt(self.wedge),
            'espar': _sqrt(self.edge_sparsify),
            'clrspar': _sqrt(self.color_sparsify),
        }

    def to_dict(self) -> dict:
        return {
            'vsamp': self.vertex,
            'esamp': self.edge,
            'wsamp': self.wedge,
            'p': self.probability,
            'espar': self.edge_sparsify,
            'clrspar': self.color_sparsify,
            'esparPrinted': self.edge_sparsify_printed,
            'clrsparPrinted': self.color_sparsify_printed,
            'std': self.standard_deviations(),
        }


@dataclass(frozen=True, eq=False)
class SampleSpace:
    """Finite distribution of one estimator iteration: outcome values and their probabilities."""
    values: np.ndarray
    weights: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.values.shape != self.weights.shape or self.values.ndim != 1:
            raise InvalidArgumentError("Sample space values and weights must be matching 1-D arrays")
        if self.values.size == 0:
            raise InvalidArgumentError("Sample space is empty")
        if not math.isclose(float(self.weights.sum()), 1.0, rel_tol=1e-9):
            raise InvalidArgumentError("Sample space weights must sum to one")

    @classmethod
    def uniform(cls, values, label: str = "") -> 'SampleSpace':
        values = np.asarray(values, dtype=np.float64)
        return cls(values, np.full(values.size, 1.0 / values.size), label)

    @property
    def size(self) -> int:
        return int(self.values.size)

    @property
    def mean(self) -> float:
        return float(np.dot(self.weights, self.values))

    @property
    def variance(self) -> float:
        deviation = self.values - self.mean
        return float(np.dot(self.weights, deviation * deviation))
