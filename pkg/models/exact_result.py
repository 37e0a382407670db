"""Exact Count Models - Side selection and instrumented exact counts."""

from dataclasses import dataclass

from .graph import Side


@dataclass(frozen=True)
class SideChoice:
    """Anchor side for exact counting; RIGHT iff cost_left < cost_right."""
    chosen: Side
    cost_left: float     # sum of squared left degrees
    cost_right: float    # sum of squared right degrees

    def to_dict(self) -> dict:
        return {'chosen': self.chosen.value, 'costLeft': self.cost_left, 'costRight': self.cost_right}


@dataclass(frozen=True)
class ExactCountResult:
    count: int
    side: Side
    counter_updates: int        # one per (anchor, middle, earlier partner) triple
    triples_visited: int = 0    # (anchor, middle, partner) triples before the order filter

    def to_dict(self) -> dict:
        return {'count': self.count, 'side': self.side.value, 'counterUpdates': self.counter_updates,
                'triplesVisited': self.triples_visited}
