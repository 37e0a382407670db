"""Sparsify Config Model - Parameters of one-shot sparsification runs."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

from .errors import InvalidArgumentError
from .estimate import validate_seed


class SparsifyMethod(str, Enum):
    EDGE = "edge"      # independent coin per edge
    COLOR = "color"    # monochromatic edges under a random vertex coloring

    @classmethod
    def parse(cls, value: str) -> 'SparsifyMethod':
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        aliases = {'edgespar': 'edge', 'espar': 'edge', 'colour': 'color',
                   'clrspar': 'color', 'colorspar': 'color'}
        try:
            return cls(aliases.get(text, text))
        except ValueError as exc:
            raise InvalidArgumentError(f"Unknown sparsification method: {value!r}") from exc


def validate_probability(p: float) -> float:
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise InvalidArgumentError(f"Retention probability must lie in (0, 1]: {p}")
    return p


def validate_colors(colors: int) -> int:
    if int(colors) != colors or colors < 1:
        raise InvalidArgumentError(f"Number of colors must be an integer >= 1: {colors}")
    return int(colors)


@dataclass
class SparsifyConfig:
    """EDGE uses `p`; COLOR uses `colors` (effective p = 1/colors)."""
    method: SparsifyMethod = SparsifyMethod.EDGE
    p: Optional[float] = None
    colors: Optional[int] = None
    seed: int = 0
    trials: int = 1
    threads: int = 1

    def __post_init__(self):
        if isinstance(self.method, str) and not isinstance(self.method, SparsifyMethod):
            self.method = SparsifyMethod.parse(self.method)
        self.seed = validate_seed(self.seed)
        if self.method == SparsifyMethod.EDGE:
            if self.p is None:
                raise InvalidArgumentError("Edge sparsification needs a retention probability p")
            self.p = validate_probability(self.p)
        else:
            if self.colors is None:
                raise InvalidArgumentError("Color sparsification needs a number of colors")
            self.colors = validate_colors(self.colors)
        if self.trials < 1:
            raise InvalidArgumentError(f"trials must be >= 1: {self.trials}")
        if self.threads < 1:
            raise InvalidArgumentError(f"threads must be >= 1: {self.threads}")

    @property
    def probability(self) -> float:
        if self.method == SparsifyMethod.EDGE:
            return self.p
        return 1.0 / self.colors

    def to_params(self) -> Dict[str, str]:
        params = {'trials': str(self.trials)}
        if self.method == SparsifyMethod.EDGE:
            params['p'] = repr(self.p)
        else:
            params['colors'] = str(self.colors)
        return params
