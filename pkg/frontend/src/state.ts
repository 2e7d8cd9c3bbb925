/** View state and the pure transitions the panes render from.
 *
 * Everything displayed is a function of (project revision, plan, local
 * selection); refreshing and replaying the server state reconstructs
 * the exact same view.
 */
import type {
  CandidateView,
  CostBreakdown,
  DescriptionDoc,
  EditResponse,
  Plan,
  ProjectState,
  RenderResponse,
  ToggleResponse,
} from "./types.js";

export const SECONDS_PER_WORD = 0.3;

export interface WordFlag {
  message: string;
  span: [number, number];
}

export interface ViewState {
  projectId: string;
  revision: number;
  project: ProjectState["project"];
  gaps: ProjectState["gaps"];
  plan: Plan | null;
  mode: string | null;
  seed: number | null;
  audioUrl: string | null;
  playhead: number;
  selectedDescription: string | null;
  /** manual toggle/slider overrides, by description id */
  overrides: Record<string, CandidateView>;
  /** protected-word rejections to flag inline, by description id */
  wordFlags: Record<string, WordFlag>;
  /** cached duration-ascending candidate lists, by description id */
  candidateLists: Record<string, CandidateView[]>;
  pendingEdits: number;
  conflict: { current: number } | null;
  banner: string | null;
}

export function initialState(loaded: ProjectState): ViewState {
  return {
    projectId: loaded.id,
    revision: loaded.revision,
    project: loaded.project,
    gaps: loaded.gaps,
    plan: loaded.plan,
    mode: loaded.mode,
    seed: loaded.seed,
    audioUrl: null,
    playhead: 0,
    selectedDescription: null,
    overrides: mapSelectionToOverrides(loaded),
    wordFlags: {},
    candidateLists: {},
    pendingEdits: 0,
    conflict: null,
    banner: null,
  };
}

function mapSelectionToOverrides(loaded: ProjectState): Record<string, CandidateView> {
  const overrides: Record<string, CandidateView> = {};
  for (const [did, kept] of Object.entries(loaded.selection ?? {})) {
    const desc = loaded.project.descriptions.find((d) => d.id === did);
    if (!desc) continue;
    overrides[did] = {
      kept_indices: kept,
      text: kept.map((i) => desc.words[i]?.text ?? "").join(" "),
      duration: estimateDuration(desc, kept),
      cut_count: 0,
      drops_last_word: false,
    };
  }
  return overrides;
}

export function spokenWordCount(desc: DescriptionDoc, kept?: number[]): number {
  const indices = kept ?? desc.words.map((_, i) => i);
  return indices.filter((i) => {
    const w = desc.words[i];
    return w !== undefined && /[a-z0-9]/i.test(w.text);
  }).length;
}

export function estimateDuration(desc: DescriptionDoc, kept?: number[]): number {
  if (desc.recording && kept) {
    let total = 0;
    for (const i of kept) {
      const span = desc.recording.alignment[i];
      if (span) total += span[1] - span[0];
    }
    return total;
  }
  if (desc.recording) {
    return desc.recording.alignment.reduce((acc, [a, b]) => acc + (b - a), 0);
  }
  return SECONDS_PER_WORD * spokenWordCount(desc, kept);
}

export function applyRender(state: ViewState, response: RenderResponse): ViewState {
  return {
    ...state,
    revision: response.revision,
    plan: response.plan,
    mode: response.plan.mode,
    audioUrl: response.audio_url,
    overrides: {},
    wordFlags: {},
    banner: null,
  };
}

export function applyToggle(state: ViewState, did: string, response: ToggleResponse): ViewState {
  const candidate: CandidateView = { ...response.candidate, cost: response.cost };
  return {
    ...state,
    revision: response.revision,
    overrides: { ...state.overrides, [did]: candidate },
    wordFlags: dropKey(state.wordFlags, did),
  };
}

export function applyProtectedRejection(
  state: ViewState,
  did: string,
  info: { message: string; span: [number, number] },
): ViewState {
  return {
    ...state,
    wordFlags: { ...state.wordFlags, [did]: { message: info.message, span: info.span } },
  };
}

export function applyCandidateList(state: ViewState, did: string, response: EditResponse): ViewState {
  return {
    ...state,
    revision: response.revision,
    candidateLists: { ...state.candidateLists, [did]: response.candidates },
  };
}

export function applyDescriptionUpdate(
  state: ViewState,
  project: ProjectState["project"],
  gaps: ProjectState["gaps"],
  did: string,
  response: EditResponse,
): ViewState {
  return {
    ...applyCandidateList(state, did, response),
    project,
    gaps,
    overrides: dropKey(state.overrides, did),
    wordFlags: dropKey(state.wordFlags, did),
  };
}

export function applyConflict(state: ViewState, current: number): ViewState {
  return { ...state, conflict: { current }, banner: "Project changed elsewhere; reload to continue." };
}

export function setPlayhead(state: ViewState, time: number, renderedDuration?: number): ViewState {
  const max = renderedDuration ?? state.project.source_duration;
  return { ...state, playhead: Math.min(Math.max(time, 0), max) };
}

export function selectDescription(state: ViewState, did: string | null): ViewState {
  const anchor = did
    ? state.project.descriptions.find((d) => d.id === did)?.anchor_time
    : undefined;
  const next = { ...state, selectedDescription: did };
  return anchor === undefined ? next : setPlayhead(next, anchor);
}

function dropKey<T>(record: Record<string, T>, key: string): Record<string, T> {
  if (!(key in record)) return record;
  const { [key]: _dropped, ...rest } = record;
  return rest;
}

/** The candidate currently shown for a description: manual override,
 * else the rendered plan's choice, else the full original. */
export function currentCandidate(state: ViewState, did: string): CandidateView {
  const override = state.overrides[did];
  if (override) return override;
  const placed = state.plan?.placed.find((p) => p.id === did);
  if (placed) return { ...placed.candidate, cost: placed.cost };
  const desc = state.project.descriptions.find((d) => d.id === did);
  if (!desc) throw new Error(`unknown description ${did}`);
  const kept = desc.words.map((_, i) => i);
  return {
    kept_indices: kept,
    text: desc.words.map((w) => w.text).join(" "),
    duration: estimateDuration(desc),
    cut_count: 0,
    drops_last_word: false,
  };
}

export interface CostReadout {
  coherence: number | null;
  informativeness: number | null;
  edit: number | null;
  weighted_total: number | null;
  label: string;
}

export function costReadout(candidate: CandidateView): CostReadout {
  const cost: CostBreakdown | undefined = candidate.cost;
  if (!cost) {
    return { coherence: null, informativeness: null, edit: null, weighted_total: null, label: "unscored" };
  }
  return {
    coherence: cost.coherence,
    informativeness: cost.informativeness,
    edit: cost.edit,
    weighted_total: cost.weighted_total,
    label: `C=${cost.weighted_total.toFixed(2)} (coh ${cost.coherence.toFixed(2)}, info ${cost.informativeness.toFixed(4)}, edit ${cost.edit.toFixed(0)})`,
  };
}
