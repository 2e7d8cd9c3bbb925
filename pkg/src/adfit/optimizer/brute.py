"""Exhaustive placement oracle for testing the dynamic program.

Enumerates every per-description decision sequence over the same
decision tables as the optimizer, depth-first in tie-break order with
cost-bound pruning, so the returned plan matches the DP's exactly:
same total cost in integer units and the same lexicographic winner.
"""
from __future__ import annotations

from ..timebase import ms
from .config import EXTENDED, INF_UNITS, OptimizerConfig
from .decisions import build_stages, evaluate_plan
from .dp import _extended_plan, _joint_infeasible_error, default_gaps, ordered_descriptions
from .geometry import PlacementContext
from .plan import CompositionPlan

GUARD_MAX_DESCRIPTIONS = 4
GUARD_MAX_SLOTS = 300
GUARD_MAX_CANDIDATES = 6


def brute_force_optimize(project, scored_by_id, config: OptimizerConfig, gaps=None) -> CompositionPlan:
    descriptions = ordered_descriptions(project)
    if config.mode == EXTENDED:
        return _extended_plan(descriptions, scored_by_id, config)
    if gaps is None:
        gaps = default_gaps(project, config)

    ctx = PlacementContext(project.source_duration, gaps, project.labels, config)
    max_cands = max((len(scored_by_id[d.id]) for d in descriptions), default=0)
    if (
        len(descriptions) > GUARD_MAX_DESCRIPTIONS
        or ctx.n_slots > GUARD_MAX_SLOTS
        or max_cands > GUARD_MAX_CANDIDATES
    ):
        raise ValueError(
            "instance too large for exhaustive search: "
            f"{len(descriptions)} descriptions (max {GUARD_MAX_DESCRIPTIONS}), "
            f"{ctx.n_slots} grid slots (max {GUARD_MAX_SLOTS}), "
            f"{max_cands} candidates (max {GUARD_MAX_CANDIDATES})"
        )

    shots_ms = [ms(t) for t in project.shots]
    stages = build_stages(descriptions, scored_by_id, ctx, shots_ms, config, config.mode)

    n = len(stages)
    best_cost = [INF_UNITS]
    best_choices = [None]
    prefix = []

    def search(i: int, e: int, acc: int) -> None:
        if acc >= best_cost[0]:
            return
        if i == n:
            best_cost[0] = acc
            best_choices[0] = list(prefix)
            return
        st = stages[i]
        for j in range(len(st)):
            cost = st.decision_cost_units(e, j)
            if cost >= INF_UNITS or acc + cost >= best_cost[0]:
                continue
            prefix.append(("place", j))
            search(i + 1, int(st.end_state[j]), acc + cost)
            prefix.pop()
        if st.skip_allowed:
            prefix.append(("skip",))
            search(i + 1, e, acc + st.skip_units)
            prefix.pop()

    search(0, 0, 0)
    if best_choices[0] is None:
        raise _joint_infeasible_error(stages)
    return evaluate_plan(stages, best_choices[0], config, config.mode)
