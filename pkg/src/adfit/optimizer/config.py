"""Optimizer configuration: all cost-model constants in one place.

Costs are carried internally as integer micro-units so the dynamic
program and the exhaustive oracle agree bit-for-bit regardless of
summation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

INLINE = "inline"
EXTENDED = "extended"
EXTENDED_INLINE = "extended_inline"
MODES = (INLINE, EXTENDED, EXTENDED_INLINE)

COST_UNIT = 1e-6
INF_UNITS = 1 << 60

MIN_EXTENDABLE_MUSIC_S = 30.0
MIN_EXTENDABLE_TEMPO_BPM = 60.0


def to_units(cost: float) -> int:
    if not math.isfinite(cost):
        return INF_UNITS
    return min(INF_UNITS, int(round(cost / COST_UNIT)))


def from_units(units: int) -> float:
    return math.inf if units >= INF_UNITS else units * COST_UNIT


@dataclass(frozen=True)
class OptimizerConfig:
    w_coh: float = 1.0
    w_info: float = 500.0
    w_edit: float = 10.0
    skip_cost: float = 10000.0
    near_overlap_penalty: float = 10.0
    near_overlap_margin: float = 0.3  # seconds
    unlabeled_region_penalty: float = 10.0
    time_grid: float = 0.1  # seconds
    placement_window: float = 120.0  # seconds around the anchor
    max_shot_crossings: int = 1
    extension_cap_factor: float = 2.0
    extension_weight: float = 1.0  # cost per second of gap lengthening
    info_cost_ceiling: float = 2.0
    candidate_cap: int = 256
    duck_db: float = -9.0
    mode: str = INLINE

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        for name in (
            "skip_cost",
            "near_overlap_penalty",
            "unlabeled_region_penalty",
            "extension_weight",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.time_grid <= 0 or self.placement_window <= 0:
            raise ValueError("time_grid and placement_window must be positive")

    @property
    def grid_ms(self) -> int:
        return int(round(self.time_grid * 1000))

    @property
    def margin_ms(self) -> int:
        return int(round(self.near_overlap_margin * 1000))

    @property
    def window_ms(self) -> int:
        return int(round(self.placement_window * 1000))

    def with_overrides(self, overrides: dict) -> "OptimizerConfig":
        unknown = set(overrides) - set(self.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown optimizer options: {sorted(unknown)}")
        return replace(self, **overrides)
