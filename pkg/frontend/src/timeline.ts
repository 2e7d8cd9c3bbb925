/** Timeline pane layout: two stacked strips.
 *
 * The speech strip shows source speech (dark) and description
 * narrations (light): at their optimizer-chosen placements once a plan
 * exists, else at their anchors with the 0.3 s/word estimate. The gap
 * strip shows music gaps in one hue and extendable gaps in another,
 * with the time remaining after the drafts anchored inside each gap
 * are accounted for.
 */
import { estimateDuration, currentCandidate, type ViewState } from "./state.js";

export interface TimelineSegment {
  kind: "speech" | "description" | "music-gap" | "extendable-gap";
  start: number;
  end: number;
  id?: string;
  remaining?: number;
}

export interface TimelineLayout {
  duration: number;
  speechRow: TimelineSegment[];
  gapRow: TimelineSegment[];
  playhead: number;
}

export function descriptionPlacements(state: ViewState): Array<{
  id: string;
  start: number;
  duration: number;
  extension: number;
  planned: boolean;
}> {
  if (state.plan) {
    return state.plan.placed.map((p) => ({
      id: p.id,
      start: p.start,
      duration: p.duration,
      extension: p.extension,
      planned: true,
    }));
  }
  return state.project.descriptions.map((d) => ({
    id: d.id,
    start: d.anchor_time,
    duration: estimateDuration(d),
    extension: 0,
    planned: false,
  }));
}

export function remainingGapTime(state: ViewState, gapIndex: number): number {
  const gap = state.gaps[gapIndex];
  if (!gap) return 0;
  let used = 0;
  if (state.plan) {
    for (const p of state.plan.placed) {
      if (p.start >= gap.start && p.start < gap.end) {
        const override = state.overrides[p.id];
        used += override ? override.duration : p.duration - p.extension;
      }
    }
  } else {
    for (const d of state.project.descriptions) {
      if (d.anchor_time >= gap.start && d.anchor_time < gap.end) {
        const kept = currentCandidate(state, d.id).kept_indices;
        used += estimateDuration(d, kept);
      }
    }
  }
  return Math.max(0, gap.end - gap.start - used);
}

export function timelineLayout(state: ViewState): TimelineLayout {
  const speechRow: TimelineSegment[] = [];
  for (const seg of state.project.labels) {
    if (seg.label === "speech") {
      speechRow.push({ kind: "speech", start: seg.start, end: seg.end });
    }
  }
  for (const w of state.project.transcript) {
    if (w.start !== undefined && w.end !== undefined) {
      speechRow.push({ kind: "speech", start: w.start, end: w.end });
    }
  }
  for (const p of descriptionPlacements(state)) {
    speechRow.push({
      kind: "description",
      start: p.start,
      end: p.start + p.duration,
      id: p.id,
    });
  }
  speechRow.sort((a, b) => a.start - b.start);

  const gapRow: TimelineSegment[] = state.gaps.map((gap, i) => ({
    kind: gap.extendable ? "extendable-gap" : "music-gap",
    start: gap.start,
    end: gap.end,
    remaining: remainingGapTime(state, i),
  }));

  return {
    duration: state.project.source_duration,
    speechRow,
    gapRow,
    playhead: state.playhead,
  };
}

/** Map a segment to pixel coordinates for a strip of the given width. */
export function toPixels(seg: { start: number; end: number }, duration: number, width: number) {
  return {
    x0: Math.round((seg.start / duration) * width),
    x1: Math.max(Math.round((seg.end / duration) * width), Math.round((seg.start / duration) * width) + 1),
  };
}
