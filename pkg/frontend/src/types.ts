/** Wire types mirroring the engine service's JSON payloads. */

export interface WordToken {
  text: string;
  start?: number;
  end?: number;
  pos?: string;
  dep_head?: number;
  dep_label?: string;
}

export interface RecordingRef {
  path: string;
  alignment: Array<[number, number]>;
}

export interface DescriptionDoc {
  id: string;
  anchor_time: number;
  words: WordToken[];
  lock_text: boolean;
  lock_time: boolean;
  lock_presence: boolean;
  recording?: RecordingRef;
}

export interface LabelSegment {
  start: number;
  end: number;
  label: string;
}

export interface ProjectDoc {
  source_duration: number;
  source_audio: string;
  transcript: WordToken[];
  labels: LabelSegment[];
  shots: number[];
  descriptions: DescriptionDoc[];
}

export interface Gap {
  start: number;
  end: number;
  label: string;
  extendable: boolean;
  max_extension: number;
}

export interface CostBreakdown {
  coherence: number;
  informativeness: number;
  edit: number;
  weighted_total: number;
}

export interface CandidateView {
  kept_indices: number[];
  text: string;
  duration: number;
  cut_count: number;
  drops_last_word: boolean;
  cost?: CostBreakdown;
}

export interface PlacedDescription {
  id: string;
  start: number;
  duration: number;
  extension: number;
  candidate: CandidateView;
  cost: CostBreakdown;
  penalty: number;
}

export interface Plan {
  mode: string;
  total_cost: number;
  total_cost_units: number;
  placed: PlacedDescription[];
  skipped: string[];
}

export interface ProjectState {
  id: string;
  revision: number;
  project: ProjectDoc;
  gaps: Gap[];
  plan: Plan | null;
  mode: string | null;
  seed: number | null;
  selection: Record<string, number[]>;
}

export interface RenderResponse {
  revision: number;
  plan: Plan;
  manifest: unknown;
  audio_url: string;
  report: string;
}

export interface ToggleResponse {
  revision: number;
  candidate: CandidateView;
  cost: CostBreakdown;
  fits: boolean | null;
  snippet_url: string | null;
}

export interface EditResponse {
  revision: number;
  candidates: CandidateView[];
  diagnostics: string[];
}

export interface ProtectedPhraseDetail {
  error: "protected-phrase";
  message: string;
  span: [number, number];
}
