/** Secondary acceptance: full UI round-trip against captured service
 * payloads. After load -> render -> toggle word -> slider select ->
 * re-render, the displayed candidate text, cost readout, and timeline
 * placements must match the service's plan JSON field for field. */
import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { EditorActions, editorView } from "../src/editor.js";
import { costReadout, currentCandidate, initialState, type ViewState } from "../src/state.js";
import { descriptionPlacements } from "../src/timeline.js";
import { fixture, scriptedFetch } from "./helpers.js";

function makeRef(state: ViewState) {
  const cell = { state };
  return {
    cell,
    ref: {
      get: () => cell.state,
      set: (next: ViewState) => {
        cell.state = next;
      },
    },
  };
}

describe("UI round-trip (secondary acceptance)", () => {
  it("toggle + slider + re-render stay field-for-field with the service", async () => {
    const loaded = fixture("get_initial");
    const render1 = fixture("render_inline");
    const toggle = fixture("toggle_d2_word1");
    const select = fixture("select_d2_shortest");
    const render2 = fixture("render_inline_again");
    const pid = loaded.id;

    const fetch = scriptedFetch([
      { method: "POST", path: new RegExp(`^/projects/${pid}/render\\?mode=inline&seed=3$`), body: render1 },
      { method: "POST", path: `/projects/${pid}/descriptions/d2/toggle-word`, body: toggle },
      { method: "POST", path: `/projects/${pid}/descriptions/d2/select-candidate`, body: select },
      { method: "POST", path: new RegExp(`^/projects/${pid}/render\\?mode=inline&seed=3$`), body: render2 },
    ]);
    const { cell, ref } = makeRef(initialState(loaded));
    const actions = new EditorActions(new ApiClient("", fetch), ref);

    // render: timeline placements mirror the plan exactly
    await actions.render("inline", 3);
    expect(cell.state.revision).toBe(render1.revision);
    expect(
      descriptionPlacements(cell.state).map((p) => ({
        id: p.id, start: p.start, duration: p.duration, extension: p.extension,
      })),
    ).toEqual(
      render1.plan.placed.map((p: any) => ({
        id: p.id, start: p.start, duration: p.duration, extension: p.extension,
      })),
    );
    const planD2 = render1.plan.placed.find((p: any) => p.id === "d2");
    expect(editorView(cell.state, "d2").candidateText).toBe(planD2.candidate.text);
    expect(currentCandidate(cell.state, "d2").cost).toEqual(planD2.cost);

    // toggle one word: displayed candidate + cost = service response
    await actions.toggleWord("d2", 1);
    const viewAfterToggle = editorView(cell.state, "d2");
    expect(viewAfterToggle.candidateText).toBe(toggle.candidate.text);
    expect(viewAfterToggle.chips.map((c) => c.included)).toEqual(
      cell.state.project.descriptions
        .find((d: any) => d.id === "d2")!
        .words.map((_: unknown, i: number) => toggle.candidate.kept_indices.includes(i)),
    );
    const readout = costReadout(currentCandidate(cell.state, "d2"));
    expect(readout.coherence).toBe(toggle.cost.coherence);
    expect(readout.informativeness).toBe(toggle.cost.informativeness);
    expect(readout.edit).toBe(toggle.cost.edit);
    expect(readout.weighted_total).toBe(toggle.cost.weighted_total);
    expect(cell.state.revision).toBe(toggle.revision);

    // slider select: candidate view matches the service's choice
    await actions.selectCandidate("d2", 0);
    expect(editorView(cell.state, "d2").candidateText).toBe(select.candidate.text);
    expect(currentCandidate(cell.state, "d2").kept_indices).toEqual(
      select.candidate.kept_indices,
    );
    expect(cell.state.revision).toBe(select.revision);

    // re-render: overrides cleared, placements track the new plan
    await actions.render("inline", 3);
    expect(cell.state.overrides).toEqual({});
    expect(
      descriptionPlacements(cell.state).map((p) => ({
        id: p.id, start: p.start, duration: p.duration, extension: p.extension,
      })),
    ).toEqual(
      render2.plan.placed.map((p: any) => ({
        id: p.id, start: p.start, duration: p.duration, extension: p.extension,
      })),
    );
    expect(fetch.remaining()).toBe(0);
  });
});
