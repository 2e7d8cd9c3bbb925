/** Thin DOM layer: renders the pane view models into the three-pane
 * layout and wires events back to the action layer. All layout logic
 * lives in the pure modules; this file only draws. */
import type { EditorActions } from "./editor.js";
import { editorView } from "./editor.js";
import { selectDescription, setPlayhead, type ViewState } from "./state.js";
import { timelineLayout, toPixels } from "./timeline.js";
import { activeItemIndex, transcriptItems } from "./transcript.js";

const COLORS: Record<string, string> = {
  speech: "#222",
  description: "#9aa7b8",
  "music-gap": "#4f7bd9",
  "extendable-gap": "#8e5bd9",
};

export interface Mount {
  update(state: ViewState): void;
}

export function mountApp(
  root: HTMLElement,
  getState: () => ViewState,
  setState: (s: ViewState) => void,
  actions: EditorActions,
): Mount {
  root.innerHTML = `
    <div class="adfit-banner" hidden></div>
    <div class="adfit-panes">
      <section class="adfit-timeline">
        <canvas class="speech-row" height="28"></canvas>
        <canvas class="gap-row" height="28"></canvas>
        <div class="adfit-controls">
          <select class="mode">
            <option value="inline">inline</option>
            <option value="extended">extended</option>
            <option value="extended_inline">extended-inline</option>
          </select>
          <button class="render">render</button>
          <audio class="preview" controls></audio>
        </div>
      </section>
      <section class="adfit-transcript"><ol></ol></section>
      <section class="adfit-descriptions"></section>
    </div>`;

  const banner = root.querySelector<HTMLElement>(".adfit-banner")!;
  const speechCanvas = root.querySelector<HTMLCanvasElement>(".speech-row")!;
  const gapCanvas = root.querySelector<HTMLCanvasElement>(".gap-row")!;
  const transcriptList = root.querySelector<HTMLOListElement>(".adfit-transcript ol")!;
  const descriptionPane = root.querySelector<HTMLElement>(".adfit-descriptions")!;
  const preview = root.querySelector<HTMLAudioElement>(".preview")!;

  root.querySelector<HTMLButtonElement>(".render")!.addEventListener("click", () => {
    const mode = root.querySelector<HTMLSelectElement>(".mode")!.value;
    void actions.render(mode, getState().seed ?? 0);
  });

  for (const canvas of [speechCanvas, gapCanvas]) {
    canvas.addEventListener("click", (ev) => {
      const state = getState();
      const frac = ev.offsetX / canvas.width;
      setState(setPlayhead(state, frac * state.project.source_duration));
    });
  }

  function drawStrip(canvas: HTMLCanvasElement, segments: ReturnType<typeof timelineLayout>["speechRow"], duration: number, playhead: number) {
    const ctx = canvas.getContext("2d");
    if (!ctx) return;
    canvas.width = canvas.clientWidth || 800;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    for (const seg of segments) {
      const { x0, x1 } = toPixels(seg, duration, canvas.width);
      ctx.fillStyle = COLORS[seg.kind] ?? "#ccc";
      const h = seg.kind === "description" ? 12 : canvas.height;
      ctx.fillRect(x0, (canvas.height - h) / 2, x1 - x0, h);
    }
    const px = Math.round((playhead / duration) * canvas.width);
    ctx.fillStyle = "#d33";
    ctx.fillRect(px, 0, 1, canvas.height);
  }

  function update(state: ViewState): void {
    banner.hidden = !state.banner;
    banner.textContent = state.banner ?? "";

    const layout = timelineLayout(state);
    drawStrip(speechCanvas, layout.speechRow, layout.duration, layout.playhead);
    drawStrip(gapCanvas, layout.gapRow, layout.duration, layout.playhead);
    if (state.audioUrl && preview.src !== state.audioUrl) preview.src = state.audioUrl;

    const items = transcriptItems(state);
    const active = activeItemIndex(items, state.playhead);
    transcriptList.replaceChildren(
      ...items.map((item, i) => {
        const li = document.createElement("li");
        li.textContent = item.text;
        li.className = `item-${item.kind}` + (i === active ? " active" : "");
        li.addEventListener("click", () => {
          let next = setPlayhead(getState(), item.start);
          if (item.kind === "description" && item.id) next = selectDescription(next, item.id);
          setState(next);
        });
        return li;
      }),
    );

    descriptionPane.replaceChildren(
      ...state.project.descriptions.map((d) => renderEditor(state, d.id)),
    );
  }

  function renderEditor(state: ViewState, did: string): HTMLElement {
    const view = editorView(state, did);
    const box = document.createElement("article");
    box.className = "adfit-editor" + (state.selectedDescription === did ? " selected" : "");

    const words = document.createElement("p");
    for (const chip of view.chips) {
      const span = document.createElement("span");
      span.textContent = chip.text + " ";
      span.className =
        (chip.included ? "word-included" : "word-dropped") + (chip.flagged ? " word-flagged" : "");
      if (chip.flagMessage) span.title = chip.flagMessage;
      span.addEventListener("click", () => void actions.toggleWord(did, chip.index));
      words.appendChild(span);
    }
    words.addEventListener("dblclick", () => {
      const text = window.prompt("Rewrite description:", view.candidateText);
      if (text) void actions.rewrite(did, text);
    });

    const cost = document.createElement("footer");
    cost.textContent = view.cost.label;

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = String((view.slider?.count ?? 1) - 1);
    slider.value = String(Math.max(view.slider?.position ?? 0, 0));
    slider.addEventListener("pointerdown", () => {
      if (!view.slider) void actions.fetchCandidates(did);
    });
    slider.addEventListener("change", () => void actions.selectCandidate(did, Number(slider.value)));

    const locks = document.createElement("nav");
    for (const kind of ["text", "time", "presence"] as const) {
      const btn = document.createElement("button");
      btn.textContent = { text: "🔒", time: "🕐", presence: "❗" }[kind];
      btn.className = view.locks[kind] ? "lock-on" : "lock-off";
      btn.addEventListener("click", () => void actions.setLock(did, kind, !view.locks[kind]));
      locks.appendChild(btn);
    }
    const rec = document.createElement("span");
    rec.textContent = view.recorded ? "✓ recorded" : "○ unrecorded";
    locks.appendChild(rec);

    box.append(locks, words, slider, cost);
    return box;
  }

  return { update };
}
