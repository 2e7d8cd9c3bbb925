import { describe, expect, it } from "vitest";

import { applyRender, initialState } from "../src/state.js";
import {
  descriptionPlacements,
  remainingGapTime,
  timelineLayout,
  toPixels,
} from "../src/timeline.js";
import { activeItemIndex, transcriptItems } from "../src/transcript.js";
import { fixture } from "./helpers.js";

const loaded = () => initialState(fixture("get_initial"));

describe("timeline pane", () => {
  it("shows drafts at anchors with estimated durations before render", () => {
    const placements = descriptionPlacements(loaded());
    const d2 = placements.find((p) => p.id === "d2")!;
    expect(d2.planned).toBe(false);
    expect(d2.start).toBe(33.0);
    expect(d2.duration).toBeCloseTo(1.8, 10);
  });

  it("gap time shrinks by 0.3s per drafted word", () => {
    // the silence gap [31, 41] holds only d2 (6 words -> 1.8 s)
    const state = loaded();
    const gapIndex = state.gaps.findIndex((g) => g.label === "silence");
    expect(remainingGapTime(state, gapIndex)).toBeCloseTo(10 - 1.8, 10);
  });

  it("overlays optimizer placements after a render", () => {
    const render = fixture("render_inline");
    const state = applyRender(loaded(), render);
    const placements = descriptionPlacements(state);
    expect(placements.map((p) => ({ id: p.id, start: p.start, duration: p.duration, extension: p.extension })))
      .toEqual(render.plan.placed.map((p: any) => ({
        id: p.id, start: p.start, duration: p.duration, extension: p.extension,
      })));
    expect(placements.every((p) => p.planned)).toBe(true);
  });

  it("layout rows are time-sorted and typed", () => {
    const layout = timelineLayout(loaded());
    const starts = layout.speechRow.map((s) => s.start);
    expect([...starts].sort((a, b) => a - b)).toEqual(starts);
    expect(new Set(layout.gapRow.map((g) => g.kind))).toEqual(
      new Set(["music-gap", "extendable-gap"]),
    );
  });

  it("maps segments to at least one pixel", () => {
    const px = toPixels({ start: 10.0, end: 10.001 }, 60, 800);
    expect(px.x1).toBeGreaterThan(px.x0);
  });
});

describe("transcript pane", () => {
  it("interleaves words, gaps and descriptions by time", () => {
    const items = transcriptItems(loaded());
    const kinds = new Set(items.map((i) => i.kind));
    expect(kinds).toEqual(new Set(["word", "gap", "description"]));
    const starts = items.map((i) => i.start);
    expect([...starts].sort((a, b) => a - b)).toEqual(starts);
  });

  it("clicking any pane's item navigates all panes to the same time", () => {
    const state = loaded();
    const items = transcriptItems(state);
    const gapItem = items.find((i) => i.kind === "gap")!;
    const idx = activeItemIndex(items, gapItem.start);
    expect(items[idx]!.start).toBeLessThanOrEqual(gapItem.start);
    expect(items[idx]!.end).toBeGreaterThan(gapItem.start);
  });
});
