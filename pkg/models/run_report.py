"""Run Report Model - The structured record each command prints."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .estimate import TracePoint, relative_error_pct


@dataclass
class RunReport:
    """
    One command result.

    relative_error_pct is derived, so it is present exactly when the exact
    count is known and positive.
    """
    command: str
    method: str = ""
    estimate: Optional[float] = None
    exact: Optional[float] = None
    iterations: int = 0
    elapsed_seconds: Optional[float] = None
    seed: Optional[int] = None
    params: Dict[str, str] = field(default_factory=dict)
    trace: Optional[List[TracePoint]] = None
    details: Dict[str, Any] = field(default_factory=dict)   # command-specific extras

    @property
    def relative_error_pct(self) -> Optional[float]:
        if self.estimate is None:
            return None
        return relative_error_pct(self.estimate, self.exact)

    def to_dict(self, include_timing: bool = True) -> dict:
        """Record with stable camelCase keys; timing fields dropped when include_timing is False."""
        data = {
            'command': self.command,
            'method': self.method,
            'estimate': self.estimate,
            'exact': self.exact,
            'relativeErrorPct': self.relative_error_pct,
            'iterations': self.iterations,
        }
        if include_timing:
            data['elapsedSeconds'] = self.elapsed_seconds
        data['seed'] = self.seed
        data['params'] = dict(self.params)
        if self.trace is not None:
            data['trace'] = [point.to_dict(include_timing) for point in self.trace]
        if self.details:
            data['details'] = self.details
        return data
