"""Per-description decision tables.

A decision is either "skip" or "place candidate r at start t". Both the
dynamic program and the exhaustive oracle enumerate exactly these
tables, so their cost models agree bit-for-bit: every decision carries
its cost in integer micro-units, and the only state-dependent term (the
near-overlap penalty against the previously placed description) uses
one shared grid rule.

Decisions are stored lexicographically by (start asc, candidate length
desc, candidate rank asc); that order is the tie-break between plans of
equal cost.
"""
from __future__ import annotations

import numpy as np

from ..timebase import ms, sec
from .config import EXTENDED_INLINE, INF_UNITS, OptimizerConfig, to_units
from .geometry import PlacementContext, shot_bounds_ms


class InfeasiblePlacementError(RuntimeError):
    def __init__(self, description_id: str, reason: str):
        super().__init__(f"description {description_id!r}: {reason}")
        self.description_id = description_id
        self.reason = reason


class DecisionTable:
    def __init__(self, description, scored, ctx: PlacementContext, shots_ms, config, mode):
        self.description = description
        self.scored = list(scored)
        self.skip_allowed = not description.lock_presence
        self.skip_units = to_units(config.skip_cost)
        self.grid_ms = ctx.grid_ms
        self.margin_ms = config.margin_ms
        self.near_units = to_units(config.near_overlap_penalty)
        self.near_value = config.near_overlap_penalty

        anchor = ms(description.anchor_time)
        window = config.window_ms
        lo_shot, hi_shot = shot_bounds_ms(shots_ms, anchor, config.max_shot_crossings)
        near_u = self.near_units
        amb_u = to_units(config.unlabeled_region_penalty)
        g = ctx.grid_ms

        t_parts, end_parts, base_parts = [], [], []
        rank_parts, x_parts, len_parts, pen_parts = [], [], [], []
        for rank, sc in enumerate(self.scored):
            l_ms = ms(sc.candidate.duration)
            if l_ms <= 0:
                continue
            c_units = to_units(sc.breakdown.weighted_total)
            for gap in ctx.gaps:
                ext = gap.max_ext_ms if (mode == EXTENDED_INLINE and gap.extendable) else 0
                lo = max(gap.start_ms, anchor - window, lo_shot, 0)
                # the narration must start inside the gap's source span;
                # only its tail may overhang into the extension
                hi = min(gap.end_ms + ext - l_ms, gap.end_ms - 1, anchor + window, hi_shot)
                if hi < lo:
                    continue
                if description.lock_time:
                    if not (lo <= anchor <= hi):
                        continue
                    t = np.array([anchor], dtype=np.int64)
                else:
                    s_lo, s_hi = -(-lo // g), hi // g
                    if s_hi < s_lo:
                        continue
                    t = np.arange(s_lo, s_hi + 1, dtype=np.int64) * g
                x = np.maximum(0, t + l_ms - gap.end_ms)
                foot_end = t + l_ms - x
                end_state = (foot_end + g - 1) // g + 1
                nb = (t - gap.start_ms < self.margin_ms) if gap.speech_before else np.zeros(len(t), bool)
                after = gap.end_ms - (t + l_ms)
                na = (np.maximum(after, 0) < self.margin_ms) if gap.speech_after else np.zeros(len(t), bool)
                amb = ctx.amb_cum[np.minimum(-(-foot_end // g), ctx.n_slots)] - ctx.amb_cum[
                    np.minimum(t // g, ctx.n_slots)
                ]
                ext_units = np.rint(config.extension_weight * x.astype(np.float64) * 1000.0).astype(np.int64)
                base = c_units + near_u * (nb.astype(np.int64) + na.astype(np.int64))
                base = base + amb_u * amb + ext_units
                pen = (
                    config.near_overlap_penalty * (nb.astype(np.float64) + na.astype(np.float64))
                    + config.unlabeled_region_penalty * amb.astype(np.float64)
                    + config.extension_weight * (x.astype(np.float64) / 1000.0)
                )
                t_parts.append(t)
                end_parts.append(end_state)
                base_parts.append(base)
                rank_parts.append(np.full(len(t), rank, dtype=np.int64))
                x_parts.append(x)
                len_parts.append(np.full(len(t), l_ms, dtype=np.int64))
                pen_parts.append(pen)

        if t_parts:
            t = np.concatenate(t_parts)
            order = np.lexsort((np.concatenate(rank_parts), -np.concatenate(len_parts), t))
            self.t_ms = t[order]
            self.end_state = np.concatenate(end_parts)[order]
            self.base_units = np.concatenate(base_parts)[order]
            self.cand_rank = np.concatenate(rank_parts)[order]
            self.x_ms = np.concatenate(x_parts)[order]
            self.len_ms = np.concatenate(len_parts)[order]
            self.base_penalty = np.concatenate(pen_parts)[order]
        else:
            self.t_ms = np.zeros(0, dtype=np.int64)
            self.end_state = np.zeros(0, dtype=np.int64)
            self.base_units = np.zeros(0, dtype=np.int64)
            self.cand_rank = np.zeros(0, dtype=np.int64)
            self.x_ms = np.zeros(0, dtype=np.int64)
            self.len_ms = np.zeros(0, dtype=np.int64)
            self.base_penalty = np.zeros(0, dtype=np.float64)

        grid_mask = self.t_ms % g == 0
        self.grid_idx = np.nonzero(grid_mask)[0]
        self.offgrid_idx = np.nonzero(~grid_mask)[0]

    def __len__(self) -> int:
        return len(self.t_ms)

    def state_ms(self, e: int) -> int:
        return (e - 1) * self.grid_ms

    def feasible(self, e: int, t_ms: int) -> bool:
        return e == 0 or t_ms >= self.state_ms(e)

    def near_prev(self, e: int, t_ms: int) -> bool:
        return e >= 1 and t_ms - self.state_ms(e) < self.margin_ms

    def decision_cost_units(self, e: int, j: int) -> int:
        """Cost of decision j taken from state e, or INF when infeasible."""
        t = int(self.t_ms[j])
        if not self.feasible(e, t):
            return INF_UNITS
        cost = int(self.base_units[j])
        if cost >= INF_UNITS:
            return INF_UNITS
        if self.near_prev(e, t):
            cost += self.near_units
        return cost


def build_stages(descriptions, scored_by_id, ctx, shots_ms, config, mode):
    stages = []
    for d in descriptions:
        table = DecisionTable(d, scored_by_id[d.id], ctx, shots_ms, config, mode)
        if d.lock_presence and len(table) == 0:
            raise InfeasiblePlacementError(
                d.id,
                "presence-locked but no candidate fits any gap within the "
                "placement window and shot constraint",
            )
        stages.append(table)
    return stages


def evaluate_plan(stages, choices, config: OptimizerConfig, mode: str):
    """Turn per-stage decisions into a CompositionPlan with recorded
    per-description costs; totals are accumulated in draft order."""
    from .plan import CompositionPlan, PlacedDescription

    placed, skipped = [], []
    costs = {}
    total_units = 0
    total_cost = 0.0
    e = 0
    for st, choice in zip(stages, choices):
        did = st.description.id
        if choice[0] == "skip":
            skipped.append(did)
            costs[did] = {"breakdown": None, "penalty": None, "skipped": True,
                          "skip_cost": config.skip_cost}
            total_units += st.skip_units
            total_cost += config.skip_cost
            continue
        j = choice[1]
        sc = st.scored[int(st.cand_rank[j])]
        t = int(st.t_ms[j])
        penalty = float(st.base_penalty[j])
        units = st.decision_cost_units(e, j)
        if st.near_prev(e, t):
            penalty += st.near_value
        placed.append(
            PlacedDescription(
                description_id=did,
                candidate=sc.candidate,
                start=sec(t),
                duration=sc.candidate.duration,
                extension=sec(int(st.x_ms[j])),
            )
        )
        costs[did] = {"breakdown": sc.breakdown, "penalty": penalty, "skipped": False}
        total_units += units
        total_cost += sc.breakdown.weighted_total + penalty
        e = int(st.end_state[j])
    return CompositionPlan(
        mode=mode,
        placed=tuple(placed),
        skipped=tuple(skipped),
        total_cost=total_cost,
        total_cost_units=total_units,
        costs=costs,
    )
