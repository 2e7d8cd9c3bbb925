/** Transcript pane: source words (dark), descriptions (light) and the
 * gaps between them, in one time-ordered sequence. Clicking any item
 * navigates every pane to the same time. */
import { estimateDuration, type ViewState } from "./state.js";

export interface TranscriptItem {
  kind: "word" | "gap" | "description";
  text: string;
  start: number;
  end: number;
  id?: string;
}

export function transcriptItems(state: ViewState): TranscriptItem[] {
  const items: TranscriptItem[] = [];
  for (const w of state.project.transcript) {
    if (w.start !== undefined && w.end !== undefined) {
      items.push({ kind: "word", text: w.text, start: w.start, end: w.end });
    }
  }
  for (const [i, gap] of state.gaps.entries()) {
    items.push({
      kind: "gap",
      text: `— ${Math.round((gap.end - gap.start) * 10) / 10}s ${gap.label} —`,
      start: gap.start,
      end: gap.end,
      id: `gap-${i}`,
    });
  }
  for (const d of state.project.descriptions) {
    const placed = state.plan?.placed.find((p) => p.id === d.id);
    const start = placed ? placed.start : d.anchor_time;
    const duration = placed ? placed.duration : estimateDuration(d);
    items.push({
      kind: "description",
      text: d.words.map((w) => w.text).join(" "),
      start,
      end: start + duration,
      id: d.id,
    });
  }
  items.sort((a, b) => a.start - b.start || a.end - b.end);
  return items;
}

/** Index of the item the playhead currently falls in (for auto-scroll). */
export function activeItemIndex(items: TranscriptItem[], playhead: number): number {
  let best = -1;
  for (let i = 0; i < items.length; i++) {
    const item = items[i];
    if (item && item.start <= playhead) {
      if (playhead < item.end) return i;
      best = i;
    }
  }
  return best;
}
