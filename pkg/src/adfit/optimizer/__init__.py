from .brute import brute_force_optimize
from .config import (
    EXTENDED,
    EXTENDED_INLINE,
    INLINE,
    MODES,
    OptimizerConfig,
)
from .decisions import InfeasiblePlacementError
from .dp import default_gaps, optimize
from .geometry import classify_extendable, placement_penalty
from .plan import CompositionPlan, PlacedDescription, ScoredCandidate

__all__ = [
    "brute_force_optimize",
    "classify_extendable",
    "CompositionPlan",
    "default_gaps",
    "EXTENDED",
    "EXTENDED_INLINE",
    "INLINE",
    "InfeasiblePlacementError",
    "MODES",
    "optimize",
    "OptimizerConfig",
    "PlacedDescription",
    "placement_penalty",
    "ScoredCandidate",
]
