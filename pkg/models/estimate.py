"""Estimate Models - Estimator configuration and outcome records."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from .errors import InvalidArgumentError

MAX_SEED = 2 ** 64 - 1


class SamplingMethod(str, Enum):
    """Local-sampling estimator families."""
    VERTEX = "vertex"
    EDGE = "edge"
    WEDGE = "wedge"
    FAST_EDGE = "fast-edge"

    @classmethod
    def parse(cls, value: str) -> 'SamplingMethod':
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace('_', '-')
        aliases = {'fastedge': 'fast-edge', 'fast': 'fast-edge'}
        try:
            return cls(aliases.get(text, text))
        except ValueError as exc:
            raise InvalidArgumentError(f"Unknown sampling method: {value!r}") from exc


def validate_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise InvalidArgumentError(f"Seed must be an unsigned 64-bit integer: {seed}")
    return seed


@dataclass
class EstimatorConfig:
    """
    Configuration of one sampling-estimator run.

    Exactly one of `iterations` and `time_budget` is set. In iteration mode
    the run performs group_size * groups iterations, where group_size
    defaults to `iterations`. With groups > 1 the reported value is the
    median of the group means.
    """
    method: SamplingMethod = SamplingMethod.EDGE
    iterations: Optional[int] = None
    time_budget: Optional[float] = None          # seconds
    seed: int = 0
    fast_edge_repeats: int = 1000                # r, FastEdge only
    groups: int = 1                              # t
    group_size: Optional[int] = None             # alpha
    trace: bool = False
    threads: int = 1
    clock_check_interval: int = 64

    def __post_init__(self):
        if isinstance(self.method, str) and not isinstance(self.method, SamplingMethod):
            self.method = SamplingMethod.parse(self.method)
        self.seed = validate_seed(self.seed)

        if (self.iterations is None) == (self.time_budget is None):
            raise InvalidArgumentError("Set exactly one of iterations and time_budget")
        if self.iterations is not None and self.iterations < 1:
            raise InvalidArgumentError(f"iterations must be >= 1: {self.iterations}")
        if self.time_budget is not None and not self.time_budget > 0:
            raise InvalidArgumentError(f"time_budget must be > 0: {self.time_budget}")
        if self.fast_edge_repeats < 1:
            raise InvalidArgumentError(f"fast_edge_repeats must be >= 1: {self.fast_edge_repeats}")
        if self.groups < 1:
            raise InvalidArgumentError(f"groups must be >= 1: {self.groups}")
        if self.groups > 1 and self.groups % 2 == 0:
            raise InvalidArgumentError(f"groups must be odd when greater than 1: {self.groups}")
        if self.group_size is not None and self.group_size < 1:
            raise InvalidArgumentError(f"group_size must be >= 1: {self.group_size}")
        if self.threads < 1:
            raise InvalidArgumentError(f"threads must be >= 1: {self.threads}")
        if self.clock_check_interval < 1:
            raise InvalidArgumentError("clock_check_interval must be >= 1")

    @property
    def is_timed(self) -> bool:
        return self.time_budget is not None

    @property
    def effective_group_size(self) -> Optional[int]:
        return self.group_size if self.group_size is not None else self.iterations

    @property
    def total_iterations(self) -> Optional[int]:
        """Iteration cap; None means the time budget alone ends the run."""
        size = self.effective_group_size
        return None if size is None else size * self.groups

    def to_params(self) -> Dict[str, str]:
        """Flat string map recorded in run reports."""
        params = {'groups': str(self.groups)}
        if self.iterations is not None:
            params['iterations'] = str(self.iterations)
        if self.time_budget is not None:
            params['timeBudget'] = repr(float(self.time_budget))
        if self.group_size is not None:
            params['groupSize'] = str(self.group_size)
        if self.method == SamplingMethod.FAST_EDGE:
            params['fastEdgeRepeats'] = str(self.fast_edge_repeats)
        return params


@dataclass
class TracePoint:
    """Running estimate at a checkpoint of an estimator run."""
    iterations: int
    elapsed_seconds: float
    estimate: float
    relative_error_pct: Optional[float] = None

    def to_dict(self, include_timing: bool = True) -> dict:
        data = {'iterations': self.iterations}
        if include_timing:
            data['elapsedSeconds'] = self.elapsed_seconds
        data['estimate'] = self.estimate
        data['relativeErrorPct'] = self.relative_error_pct
        return data


def relative_error_pct(estimate: float, exact: Optional[float]) -> Optional[float]:
    """100 * |exact - estimate| / exact, undefined unless exact > 0."""
    if exact is None or exact <= 0:
        return None
    return 100.0 * abs(float(exact) - float(estimate)) / float(exact)


@dataclass
class Estimate:
    """Outcome of one randomized estimator run."""
    value: float
    iterations_done: int
    elapsed: float
    seed: int
    method: str = ""
    per_group_means: List[float] = field(default_factory=list)
    trial_values: List[float] = field(default_factory=list)
    trace: List[TracePoint] = field(default_factory=list)

    def __post_init__(self):
        if self.value < 0:
            raise InvalidArgumentError(f"Estimate value cannot be negative: {self.value}")

    def with_exact(self, exact: Optional[float]) -> 'Estimate':
        """Fill relative errors of the trace for a known exact count."""
        for point in self.trace:
            point.relative_error_pct = relative_error_pct(point.estimate, exact)
        return self

    def to_dict(self) -> dict:
        return {
            'value': self.value,
            'iterationsDone': self.iterations_done,
            'elapsed': self.elapsed,
            'seed': self.seed,
            'method': self.method,
            'perGroupMeans': list(self.per_group_means),
            'trialValues': list(self.trial_values),
            'trace': [point.to_dict() for point in self.trace],
        }


@dataclass(frozen=True)
class IterationPlan:
    """Median-of-means shape: `groups` groups of `group_size` iterations."""
    groups: int
    group_size: int

    @property
    def total(self) -> int:
        return self.groups * self.group_size

    def to_dict(self) -> dict:
        return {'groups': self.groups, 'groupSize': self.group_size, 'total': self.total}
