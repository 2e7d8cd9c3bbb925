"""adfit: automatic shortening and placement of audio descriptions.

Takes draft narrations for a video plus the source-track geometry
(transcript word timings, music/speech/silence labels, shot boundaries)
and produces inline, extended, and extended-inline description tracks
via candidate generation, a weighted cost model, dynamic-programming
placement, and sample-accurate audio retargeting.
"""
from .candidates import Candidate, DropUnit, ProtectedPhraseSet
from .model import (
    AudioLabelSegment,
    Diagnostic,
    DraftDescription,
    GapSegment,
    Project,
    Recording,
    TimedWord,
    compute_gaps,
    estimate_description_duration,
    validate_project,
)
from .optimizer import (
    CompositionPlan,
    InfeasiblePlacementError,
    OptimizerConfig,
    PlacedDescription,
    ScoredCandidate,
    brute_force_optimize,
    classify_extendable,
    optimize,
    placement_penalty,
)
from .scoring import BigramModel, CorpusFrequencyTable, CostBreakdown

__version__ = "0.1.0"
