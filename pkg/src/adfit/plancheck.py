"""Post-hoc plan validation: output-time geometry per mode.

Maps placements and speech intervals into output-time coordinates
(pauses inserted for extended mode, cumulative gap extensions for
extended-inline) and reports narration/speech or narration/narration
intersections plus extension-cap violations.
"""
from __future__ import annotations

from .model import compute_gaps, speech_intervals_ms
from .optimizer.config import EXTENDED, EXTENDED_INLINE
from .timebase import ms


def output_geometry(project, plan, gaps=None):
    """(narration_intervals, speech_intervals) in output-time ms."""
    speech = speech_intervals_ms(project.labels, project.transcript)

    if plan.mode == EXTENDED:
        # pauses insert narration, splitting whatever interval they land in
        narrations = []
        events = []
        inserted = 0
        for p in plan.placed:
            t, l = ms(p.start), ms(p.duration)
            narrations.append((t + inserted, t + inserted + l, p.description_id))
            events.append((t, l))
            inserted += l

        def out_pos(x: int, after_inserts: bool) -> int:
            total = 0
            for t, l in events:
                if t < x or (after_inserts and t == x):
                    total += l
            return x + total

        shifted_speech = []
        for a, b in speech:
            cuts = sorted({a, b, *[t for t, _ in events if a < t < b]})
            for p, q in zip(cuts, cuts[1:]):
                shifted_speech.append((out_pos(p, True), out_pos(q, False)))
        return narrations, shifted_speech

    if gaps is None:
        gaps = compute_gaps(project.labels, project.transcript)
    gap_bounds = [(ms(g.start), ms(g.end)) for g in gaps]

    ext_by_gap = [0] * len(gap_bounds)
    gap_of = {}
    for p in plan.placed:
        t = ms(p.start)
        for k, (a, b) in enumerate(gap_bounds):
            if a <= t < b:
                gap_of[p.description_id] = k
                ext_by_gap[k] += ms(p.extension)
                break

    def shift_at(t_ms: int, inclusive: bool) -> int:
        total = 0
        for k, (a, b) in enumerate(gap_bounds):
            if b < t_ms or (inclusive and b <= t_ms):
                total += ext_by_gap[k]
        return total

    narrations = []
    for p in plan.placed:
        k = gap_of.get(p.description_id)
        base_shift = sum(ext_by_gap[:k]) if k is not None else shift_at(ms(p.start), False)
        a = ms(p.start) + base_shift
        narrations.append((a, a + ms(p.duration), p.description_id))
    shifted_speech = [(a + shift_at(a, True), b + shift_at(b, False)) for a, b in speech]
    return narrations, shifted_speech


def plan_violations(project, plan, gaps=None) -> list:
    """Human-readable descriptions of geometry violations; empty = valid."""
    problems = []
    narrations, speech = output_geometry(project, plan, gaps)

    for a, b, did in narrations:
        for sa, sb in speech:
            if a < sb and sa < b:
                problems.append(
                    f"narration {did!r} [{a}, {b})ms overlaps speech [{sa}, {sb})ms"
                )
    ordered = sorted(narrations)
    for (a1, b1, d1), (a2, b2, d2) in zip(ordered, ordered[1:]):
        if a2 < b1:
            problems.append(f"narrations {d1!r} and {d2!r} overlap in output time")

    if plan.mode == EXTENDED_INLINE:
        if gaps is None:
            gaps = compute_gaps(project.labels, project.transcript)
        for k, g in enumerate(gaps):
            ext = sum(
                ms(p.extension)
                for p in plan.placed
                if ms(g.start) <= ms(p.start) < ms(g.end)
            )
            if ext > ms(g.end) - ms(g.start):
                problems.append(
                    f"gap [{g.start}, {g.end}) extended by {ext}ms, beyond 2x its length"
                )
    else:
        for p in plan.placed:
            if p.extension:
                problems.append(
                    f"placement {p.description_id!r} carries extension in mode {plan.mode}"
                )
    return problems
