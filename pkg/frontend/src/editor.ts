/** Description pane: word-chip toggling, the candidate slider, locks,
 * rewrite and recording, with optimistic updates reconciled against
 * the service's revisioned responses. */
import {
  ApiClient,
  ProtectedWordError,
  RevisionConflictError,
} from "./api.js";
import {
  applyCandidateList,
  applyConflict,
  applyDescriptionUpdate,
  applyProtectedRejection,
  applyRender,
  applyToggle,
  currentCandidate,
  costReadout,
  type CostReadout,
  type ViewState,
} from "./state.js";

export interface WordChip {
  index: number;
  text: string;
  included: boolean;
  flagged: boolean;
  flagMessage: string | null;
}

export interface EditorView {
  id: string;
  anchor: number;
  locks: { text: boolean; time: boolean; presence: boolean };
  recorded: boolean;
  chips: WordChip[];
  candidateText: string;
  cost: CostReadout;
  slider: { count: number; position: number } | null;
  flagMessage: string | null;
}

export function editorView(state: ViewState, did: string): EditorView {
  const desc = state.project.descriptions.find((d) => d.id === did);
  if (!desc) throw new Error(`unknown description ${did}`);
  const candidate = currentCandidate(state, did);
  const kept = new Set(candidate.kept_indices);
  const flag = state.wordFlags[did] ?? null;

  const chips: WordChip[] = desc.words.map((w, i) => ({
    index: i,
    text: w.text,
    included: kept.has(i),
    flagged: flag !== null && i >= flag.span[0] && i < flag.span[1],
    flagMessage: flag !== null && i >= flag.span[0] && i < flag.span[1] ? flag.message : null,
  }));

  const list = state.candidateLists[did];
  let slider: EditorView["slider"] = null;
  if (list && list.length > 0) {
    const position = list.findIndex(
      (c) => c.kept_indices.length === candidate.kept_indices.length &&
        c.kept_indices.every((v, i) => v === candidate.kept_indices[i]),
    );
    slider = { count: list.length, position };
  }

  return {
    id: did,
    anchor: desc.anchor_time,
    locks: { text: desc.lock_text, time: desc.lock_time, presence: desc.lock_presence },
    recorded: Boolean(desc.recording),
    chips,
    candidateText: candidate.text,
    cost: costReadout(candidate),
    slider,
    flagMessage: flag?.message ?? null,
  };
}

export type StateRef = {
  get: () => ViewState;
  set: (next: ViewState) => void;
};

/** Imperative edge: every action talks to the service and folds the
 * response (or rejection) back into the view state. */
export class EditorActions {
  constructor(private readonly api: ApiClient, private readonly ref: StateRef) {}

  private fail(err: unknown, did: string): void {
    const state = this.ref.get();
    if (err instanceof RevisionConflictError) {
      this.ref.set(applyConflict(state, err.current));
      return;
    }
    if (err instanceof ProtectedWordError) {
      this.ref.set(applyProtectedRejection(state, did, err.info));
      return;
    }
    this.ref.set({ ...state, banner: String(err) });
  }

  async toggleWord(did: string, wordIndex: number): Promise<void> {
    const state = this.ref.get();
    try {
      const response = await this.api.toggleWord(
        state.projectId, did, state.revision, wordIndex,
      );
      this.ref.set(applyToggle(this.ref.get(), did, response));
    } catch (err) {
      this.fail(err, did);
    }
  }

  async selectCandidate(did: string, index: number): Promise<void> {
    const state = this.ref.get();
    try {
      const response = await this.api.selectCandidate(
        state.projectId, did, state.revision, index,
      );
      this.ref.set(applyToggle(this.ref.get(), did, response));
    } catch (err) {
      this.fail(err, did);
    }
  }

  async fetchCandidates(did: string): Promise<void> {
    const state = this.ref.get();
    try {
      const response = await this.api.listCandidates(state.projectId, did, state.revision);
      this.ref.set(applyCandidateList(this.ref.get(), did, response));
    } catch (err) {
      this.fail(err, did);
    }
  }

  async setLock(did: string, lock: "text" | "time" | "presence", value: boolean): Promise<void> {
    await this.edit(did, { [`lock_${lock}`]: value });
  }

  async moveAnchor(did: string, anchorTime: number): Promise<void> {
    await this.edit(did, { anchor_time: anchorTime });
  }

  /** Double-click rewrite: plain-text edit; the service deletes any
   * recording and says so in its diagnostics. */
  async rewrite(did: string, text: string): Promise<void> {
    await this.edit(did, { text });
  }

  async uploadRecording(
    did: string,
    wavBase64: string,
    alignment: Array<[number, number]>,
  ): Promise<void> {
    const state = this.ref.get();
    try {
      const response = await this.api.uploadRecording(
        state.projectId, did, state.revision, wavBase64, alignment,
      );
      const refreshed = await this.api.getProject(state.projectId);
      this.ref.set({
        ...this.ref.get(),
        revision: response.revision,
        project: refreshed.project,
        gaps: refreshed.gaps,
      });
    } catch (err) {
      this.fail(err, did);
    }
  }

  async render(mode: string, seed: number): Promise<void> {
    const state = this.ref.get();
    try {
      const response = await this.api.render(state.projectId, mode, seed);
      this.ref.set(applyRender(this.ref.get(), response));
    } catch (err) {
      this.fail(err, "");
    }
  }

  private async edit(did: string, body: Record<string, unknown>): Promise<void> {
    const state = this.ref.get();
    try {
      const response = await this.api.editDescription(
        state.projectId, did, state.revision, body,
      );
      const refreshed = await this.api.getProject(state.projectId);
      this.ref.set(
        applyDescriptionUpdate(
          this.ref.get(), refreshed.project, refreshed.gaps, did, response,
        ),
      );
    } catch (err) {
      this.fail(err, did);
    }
  }
}
