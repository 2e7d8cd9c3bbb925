"""Composition plan types: the optimizer's output."""
from __future__ import annotations

from dataclasses import dataclass

from ..candidates import Candidate
from ..scoring import CostBreakdown
from ..timebase import snap


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: Candidate
    breakdown: CostBreakdown

    @property
    def text(self) -> str:
        return self.candidate.text


@dataclass(frozen=True)
class PlacedDescription:
    description_id: str
    candidate: Candidate
    start: float  # seconds in source-time coordinates
    duration: float
    extension: float = 0.0  # seconds of gap lengthening this placement consumes

    def __post_init__(self):
        object.__setattr__(self, "start", snap(self.start))
        object.__setattr__(self, "duration", snap(self.duration))
        object.__setattr__(self, "extension", snap(self.extension))

    @property
    def end(self) -> float:
        return snap(self.start + self.duration - self.extension)


@dataclass(frozen=True)
class CompositionPlan:
    mode: str
    placed: tuple  # PlacedDescription, in draft order
    skipped: tuple  # description ids, in draft order
    total_cost: float
    total_cost_units: int
    costs: dict  # id -> {"breakdown": CostBreakdown, "penalty": float, "skipped": bool}

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "total_cost": self.total_cost,
            "total_cost_units": self.total_cost_units,
            "placed": [
                {
                    "id": p.description_id,
                    "start": p.start,
                    "duration": p.duration,
                    "extension": p.extension,
                    "candidate": {
                        "kept_indices": list(p.candidate.kept_indices),
                        "text": p.candidate.text,
                        "duration": p.candidate.duration,
                        "cut_count": p.candidate.cut_count,
                        "drops_last_word": p.candidate.drops_last_word,
                    },
                    "cost": _breakdown_dict(self.costs[p.description_id]["breakdown"]),
                    "penalty": self.costs[p.description_id]["penalty"],
                }
                for p in self.placed
            ],
            "skipped": list(self.skipped),
        }


def _breakdown_dict(b: CostBreakdown) -> dict:
    return {
        "coherence": b.coherence,
        "informativeness": b.informativeness,
        "edit": b.edit,
        "weighted_total": b.weighted_total,
    }
