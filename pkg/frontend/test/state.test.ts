import { describe, expect, it } from "vitest";

import {
  applyConflict,
  applyRender,
  applyToggle,
  costReadout,
  currentCandidate,
  estimateDuration,
  initialState,
  selectDescription,
  setPlayhead,
} from "../src/state.js";
import { fixture } from "./helpers.js";

const loaded = () => initialState(fixture("get_initial"));

describe("view state", () => {
  it("estimates unrecorded narration at 0.3s per word", () => {
    const state = loaded();
    const bench = state.project.descriptions.find((d) => d.id === "d2")!;
    expect(estimateDuration(bench)).toBeCloseTo(1.8, 10); // 6 words
    const beach = state.project.descriptions.find((d) => d.id === "d1")!;
    expect(estimateDuration(beach)).toBeCloseTo(4.8, 10); // 16 spoken + "."
  });

  it("shows the full original before any plan exists", () => {
    const state = loaded();
    const candidate = currentCandidate(state, "d2");
    expect(candidate.text).toBe("A long bench with blue birds");
    expect(candidate.kept_indices).toEqual([0, 1, 2, 3, 4, 5]);
    expect(costReadout(candidate).label).toBe("unscored");
  });

  it("prefers the plan's candidate after a render", () => {
    const state = applyRender(loaded(), fixture("render_inline"));
    const placed = fixture("render_inline").plan.placed.find((p: any) => p.id === "d2");
    const candidate = currentCandidate(state, "d2");
    expect(candidate.text).toBe(placed.candidate.text);
    expect(candidate.cost).toEqual(placed.cost);
  });

  it("manual overrides beat the plan", () => {
    let state = applyRender(loaded(), fixture("render_inline"));
    state = applyToggle(state, "d2", fixture("toggle_d2_word1"));
    expect(currentCandidate(state, "d2").text).toBe(
      fixture("toggle_d2_word1").candidate.text,
    );
  });

  it("re-render clears overrides and flags", () => {
    let state = applyRender(loaded(), fixture("render_inline"));
    state = applyToggle(state, "d2", fixture("toggle_d2_word1"));
    state = applyRender(state, fixture("render_inline_again"));
    expect(state.overrides).toEqual({});
    expect(state.wordFlags).toEqual({});
  });

  it("clamps the playhead to the timeline", () => {
    const state = loaded();
    expect(setPlayhead(state, -5).playhead).toBe(0);
    expect(setPlayhead(state, 1e9).playhead).toBe(state.project.source_duration);
    expect(setPlayhead(state, 12.5).playhead).toBe(12.5);
  });

  it("selecting a description navigates to its anchor", () => {
    const state = selectDescription(loaded(), "d2");
    expect(state.selectedDescription).toBe("d2");
    expect(state.playhead).toBe(33.0);
  });

  it("conflicts surface as a reload banner", () => {
    const state = applyConflict(loaded(), 9);
    expect(state.conflict).toEqual({ current: 9 });
    expect(state.banner).toMatch(/reload/i);
  });
});
