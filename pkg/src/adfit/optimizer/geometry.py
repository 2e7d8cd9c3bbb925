"""Placement geometry: gap extendability, the speech timeline on the
grid, and the per-placement penalty model.

A placement of candidate length l at start t inside gap [g0, g1) uses
extension x = max(0, t + l - g1) when the mode allows it; its source
footprint is [t, t + l - x). Only the last placement in a gap can carry
extension, so the per-gap 2x cap reduces to x <= max_extension.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from ..model import AMBIENT, MUSIC, SILENCE, Diagnostic, GapSegment
from ..timebase import ms, sec
from .config import (
    EXTENDED,
    EXTENDED_INLINE,
    INLINE,
    MIN_EXTENDABLE_MUSIC_S,
    MIN_EXTENDABLE_TEMPO_BPM,
    OptimizerConfig,
)


def classify_extendable(
    gap: GapSegment,
    tempo_bpm=None,
    cap_factor: float = 2.0,
    diagnostics=None,
) -> GapSegment:
    """Fill in a gap's extendability: silence/ambient always extend;
    music extends only when >= 30 s long with tempo >= 60 bpm."""
    if gap.label in (SILENCE, AMBIENT):
        extendable = True
    elif gap.label == MUSIC:
        if tempo_bpm is None:
            extendable = False
            if diagnostics is not None:
                diagnostics.append(
                    Diagnostic(
                        "no-tempo",
                        "music gap has no tempo estimate; treated as not extendable",
                        f"gap [{gap.start}, {gap.end})",
                    )
                )
        else:
            extendable = (
                gap.duration >= MIN_EXTENDABLE_MUSIC_S
                and tempo_bpm >= MIN_EXTENDABLE_TEMPO_BPM
            )
    else:
        extendable = False
    max_ext = (cap_factor - 1.0) * gap.duration if extendable else 0.0
    return GapSegment(
        start=gap.start,
        end=gap.end,
        label=gap.label,
        extendable=extendable,
        max_extension=max_ext,
    )


@dataclass(frozen=True)
class GapGeom:
    start_ms: int
    end_ms: int
    label: str
    extendable: bool
    max_ext_ms: int
    speech_before: bool
    speech_after: bool

    @property
    def length_ms(self) -> int:
        return self.end_ms - self.start_ms


class PlacementContext:
    """Grid-level geometry shared by the optimizer, its oracle and the
    public penalty function."""

    def __init__(self, duration_s: float, gaps, labels, config: OptimizerConfig):
        self.config = config
        self.duration_ms = ms(duration_s)
        g = config.grid_ms
        self.grid_ms = g
        self.n_slots = -(-self.duration_ms // g)  # ceil
        self.n_states = self.n_slots + 2

        dur = self.duration_ms
        self.gaps = [
            GapGeom(
                start_ms=ms(gp.start),
                end_ms=ms(gp.end),
                label=gp.label,
                extendable=gp.extendable,
                max_ext_ms=ms(gp.max_extension),
                speech_before=ms(gp.start) > 0,
                speech_after=ms(gp.end) < dur,
            )
            for gp in gaps
        ]
        self.gap_starts = [gp.start_ms for gp in self.gaps]

        # Per grid slot: penalized when the label at the slot midpoint is
        # neither music nor silence (i.e. ambient); speech slots never
        # appear in a placement footprint.
        ordered = sorted(labels, key=lambda s: ms(s.start))
        starts = [ms(s.start) for s in ordered]
        amb = np.zeros(self.n_slots, dtype=np.int64)
        for j in range(self.n_slots):
            mid = j * g + g // 2
            k = bisect.bisect_right(starts, mid) - 1
            if 0 <= k < len(ordered) and ms(ordered[k].end) > mid:
                if ordered[k].label == AMBIENT:
                    amb[j] = 1
        self.amb_cum = np.zeros(self.n_slots + 1, dtype=np.int64)
        np.cumsum(amb, out=self.amb_cum[1:])

    def find_gap(self, t_ms: int):
        k = bisect.bisect_right(self.gap_starts, t_ms) - 1
        if k >= 0 and t_ms < self.gaps[k].end_ms:
            return self.gaps[k]
        return None

    def ambient_slots(self, t_ms: int, foot_end_ms: int) -> int:
        lo = min(max(t_ms // self.grid_ms, 0), self.n_slots)
        hi = min(max(-(-foot_end_ms // self.grid_ms), 0), self.n_slots)
        if hi <= lo:
            return 0
        return int(self.amb_cum[hi] - self.amb_cum[lo])


def shot_bounds_ms(shots_ms, anchor_ms: int, max_crossings: int):
    """Inclusive [lo, hi] start-time bounds such that at most
    ``max_crossings`` shot boundaries lie strictly between t and the
    anchor."""
    below = [s for s in shots_ms if s < anchor_ms]
    above = [s for s in shots_ms if s > anchor_ms]
    lo = below[-(max_crossings + 1)] if len(below) > max_crossings else -(1 << 50)
    hi = above[max_crossings] if len(above) > max_crossings else 1 << 50
    return lo, hi


def penalty_components(
    ctx: PlacementContext,
    gap: GapGeom,
    t_ms: int,
    l_ms: int,
    config: OptimizerConfig,
    mode: str,
):
    """(near_before, near_after, ambient_slots, x_ms) for a feasible
    placement, or None when infeasible in this gap."""
    if t_ms < gap.start_ms:
        return None
    overhang = t_ms + l_ms - gap.end_ms
    if overhang > 0:
        if mode != EXTENDED_INLINE or not gap.extendable or overhang > gap.max_ext_ms:
            return None
        x_ms = overhang
    else:
        x_ms = 0
    foot_end = t_ms + l_ms - x_ms
    m = config.margin_ms
    near_before = gap.speech_before and (t_ms - gap.start_ms) < m
    after_dist = max(0, gap.end_ms - (t_ms + l_ms))
    near_after = gap.speech_after and after_dist < m
    amb = ctx.ambient_slots(t_ms, foot_end)
    return near_before, near_after, amb, x_ms


def base_penalty_value(components, config: OptimizerConfig) -> float:
    near_before, near_after, amb, x_ms = components
    return (
        config.near_overlap_penalty * (int(near_before) + int(near_after))
        + config.unlabeled_region_penalty * amb
        + config.extension_weight * sec(x_ms)
    )


def placement_penalty(placed, project, config: OptimizerConfig, prev_end=None, gaps=None) -> float:
    """Placement penalty P for one placed description.

    Infinite when the placement intersects speech or the previously
    placed description; otherwise near-overlap penalties, the per-window
    unlabeled-region penalty over the source footprint, and the
    extension cost in seconds. Extended mode has no placement pressure.
    """
    if config.mode == EXTENDED:
        return 0.0
    from ..model import compute_gaps

    if gaps is None:
        gaps = [
            classify_extendable(gp, cap_factor=config.extension_cap_factor)
            for gp in compute_gaps(project.labels, project.transcript)
        ]
    ctx = PlacementContext(project.source_duration, gaps, project.labels, config)
    t_ms = ms(placed.start)
    l_ms = ms(placed.duration)
    gap = ctx.find_gap(t_ms)
    if gap is None:
        return math.inf
    comp = penalty_components(ctx, gap, t_ms, l_ms, config, config.mode)
    if comp is None:
        return math.inf
    penalty = base_penalty_value(comp, config)
    if prev_end is not None:
        prev_ms = ms(prev_end)
        if t_ms < prev_ms:
            return math.inf
        if t_ms - prev_ms < config.margin_ms:
            penalty += config.near_overlap_penalty
    return penalty
