"""Globally optimal description placement by dynamic programming.

State: (description index, grid slot where the last placement ends).
The value function is computed backwards with the sweep kernel; the
plan is then reconstructed front-first, which makes the tie-break
exact: among equal-cost plans the winner is lexicographically first by
(earlier start, longer candidate, candidate rank) per description in
draft order, with skipping ordered after every placement.
"""
from __future__ import annotations

import numpy as np

from .._kernels import backward_sweep
from ..timebase import ms
from .config import EXTENDED, INF_UNITS, OptimizerConfig, to_units
from .decisions import InfeasiblePlacementError, build_stages, evaluate_plan
from .geometry import PlacementContext, classify_extendable
from .plan import CompositionPlan, PlacedDescription


def ordered_descriptions(project):
    return sorted(project.descriptions, key=lambda d: (ms(d.anchor_time), d.id))


def default_gaps(project, config: OptimizerConfig, tempo_by_gap=None, diagnostics=None):
    """Classify the project's gaps; music tempo estimates, when known,
    are passed as {(start_ms, end_ms): bpm}."""
    from ..model import compute_gaps

    tempo_by_gap = tempo_by_gap or {}
    gaps = []
    for gp in compute_gaps(project.labels, project.transcript):
        bpm = tempo_by_gap.get((ms(gp.start), ms(gp.end)))
        gaps.append(
            classify_extendable(
                gp, bpm, cap_factor=config.extension_cap_factor, diagnostics=diagnostics
            )
        )
    return gaps


def optimize(project, scored_by_id, config: OptimizerConfig, gaps=None, diagnostics=None) -> CompositionPlan:
    """Minimize total composition cost over skip/candidate/start choices.

    ``scored_by_id`` maps description id to its ScoredCandidate list in
    canonical (slider) order. Placements are monotone in draft order and
    constrained to the anchor window and shot-crossing budget.
    """
    descriptions = ordered_descriptions(project)
    if config.mode == EXTENDED:
        return _extended_plan(descriptions, scored_by_id, config)
    if gaps is None:
        gaps = default_gaps(project, config, diagnostics=diagnostics)

    ctx = PlacementContext(project.source_duration, gaps, project.labels, config)
    shots_ms = [ms(t) for t in project.shots]
    stages = build_stages(descriptions, scored_by_id, ctx, shots_ms, config, config.mode)

    n = len(stages)
    g_levels = [None] * (n + 1)
    g_levels[n] = np.zeros(ctx.n_states, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        st = stages[i]
        g_levels[i] = backward_sweep(
            g_levels[i + 1],
            st.t_ms,
            st.end_state,
            st.base_units,
            st.grid_idx,
            st.offgrid_idx,
            st.skip_units,
            st.skip_allowed,
            st.near_units,
            st.grid_ms,
            st.margin_ms,
        )

    choices = _reconstruct(stages, g_levels)
    return evaluate_plan(stages, choices, config, config.mode)


def _reconstruct(stages, g_levels):
    if stages and int(g_levels[0][0]) >= INF_UNITS:
        raise _joint_infeasible_error(stages)
    e = 0
    budget = int(g_levels[0][0]) if stages else 0
    choices = []
    for i, st in enumerate(stages):
        nxt = np.minimum(g_levels[i + 1], INF_UNITS)
        choice = None
        if len(st):
            t = st.t_ms
            if e == 0:
                feas = np.ones(len(t), dtype=bool)
                near = np.zeros(len(t), dtype=bool)
            else:
                e_ms = (e - 1) * st.grid_ms
                feas = t >= e_ms
                near = (t - e_ms) < st.margin_ms
            cost = st.base_units + near.astype(np.int64) * st.near_units
            ok = feas & (st.base_units < INF_UNITS) & (cost + nxt[st.end_state] == budget)
            hits = np.nonzero(ok)[0]
            if len(hits):
                j = int(hits[0])
                choices.append(("place", j))
                budget -= int(cost[j])
                e = int(st.end_state[j])
                choice = True
        if choice is None:
            if st.skip_allowed and st.skip_units + int(nxt[e]) == budget:
                choices.append(("skip",))
                budget -= st.skip_units
            else:
                raise InfeasiblePlacementError(
                    st.description.id,
                    "no feasible placement compatible with the other locked descriptions",
                )
    assert budget == 0, "reconstruction must consume the optimal value exactly"
    return choices


def _joint_infeasible_error(stages):
    for st in stages:
        if not st.skip_allowed:
            return InfeasiblePlacementError(
                st.description.id,
                "presence-locked but no composition can place it without overlap",
            )
    return InfeasiblePlacementError(stages[0].description.id, "no feasible composition")


def _extended_plan(descriptions, scored_by_id, config: OptimizerConfig) -> CompositionPlan:
    """Extended mode pauses the source at each anchor, so every draft is
    placed verbatim with no placement pressure."""
    placed = []
    costs = {}
    total_units = 0
    total_cost = 0.0
    for d in descriptions:
        scored = scored_by_id[d.id]
        full = next(
            (sc for sc in scored if len(sc.candidate.kept_indices) == len(d.words)),
            max(scored, key=lambda sc: len(sc.candidate.kept_indices)),
        )
        placed.append(
            PlacedDescription(
                description_id=d.id,
                candidate=full.candidate,
                start=d.anchor_time,
                duration=full.candidate.duration,
                extension=0.0,
            )
        )
        costs[d.id] = {"breakdown": full.breakdown, "penalty": 0.0, "skipped": False}
        total_units += to_units(full.breakdown.weighted_total)
        total_cost += full.breakdown.weighted_total
    return CompositionPlan(
        mode=EXTENDED,
        placed=tuple(placed),
        skipped=(),
        total_cost=total_cost,
        total_cost_units=total_units,
        costs=costs,
    )
