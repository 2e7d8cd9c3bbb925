/** Typed client for the engine's HTTP API.
 *
 * Every mutating call carries the caller's base revision; a 409 from
 * the service surfaces as RevisionConflictError so the UI can prompt a
 * reload, and protected-word rejections surface with their span so the
 * editor can flag the exact words.
 */
import type {
  EditResponse,
  ProjectDoc,
  ProjectState,
  ProtectedPhraseDetail,
  RenderResponse,
  ToggleResponse,
  WordToken,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string, readonly detail?: unknown) {
    super(message);
  }
}

export class RevisionConflictError extends ApiError {
  constructor(readonly current: number, readonly base: number) {
    super(409, `revision conflict: server at ${current}, edit based on ${base}`);
  }
}

export class ProtectedWordError extends ApiError {
  constructor(readonly info: ProtectedPhraseDetail) {
    super(422, info.message);
  }
}

export interface DescriptionEdit {
  words?: WordToken[];
  text?: string;
  anchor_time?: number;
  lock_text?: boolean;
  lock_time?: boolean;
  lock_presence?: boolean;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.ok) return (await response.json()) as T;

    let detail: unknown;
    try {
      detail = ((await response.json()) as { detail?: unknown }).detail;
    } catch {
      detail = undefined;
    }
    if (response.status === 409 && isRecord(detail) && detail.error === "revision-conflict") {
      throw new RevisionConflictError(Number(detail.current), Number(detail.base));
    }
    if (isRecord(detail) && detail.error === "protected-phrase") {
      throw new ProtectedWordError(detail as unknown as ProtectedPhraseDetail);
    }
    throw new ApiError(response.status, `${method} ${path} failed (${response.status})`, detail);
  }

  createProject(project: ProjectDoc, sourceAudioBase64?: string): Promise<{ id: string; revision: number }> {
    return this.request("POST", "/projects", {
      project,
      source_audio_base64: sourceAudioBase64,
    });
  }

  getProject(id: string): Promise<ProjectState> {
    return this.request("GET", `/projects/${id}`);
  }

  render(id: string, mode: string, seed: number): Promise<RenderResponse> {
    return this.request("POST", `/projects/${id}/render?mode=${encodeURIComponent(mode)}&seed=${seed}`);
  }

  editDescription(id: string, did: string, baseRevision: number, edit: DescriptionEdit): Promise<EditResponse> {
    return this.request("PUT", `/projects/${id}/descriptions/${did}`, {
      base_revision: baseRevision,
      ...edit,
    });
  }

  /** A no-op edit: the service's candidate-regeneration endpoint. */
  listCandidates(id: string, did: string, baseRevision: number): Promise<EditResponse> {
    return this.editDescription(id, did, baseRevision, {});
  }

  toggleWord(id: string, did: string, baseRevision: number, wordIndex: number): Promise<ToggleResponse> {
    return this.request("POST", `/projects/${id}/descriptions/${did}/toggle-word`, {
      base_revision: baseRevision,
      word_index: wordIndex,
    });
  }

  selectCandidate(id: string, did: string, baseRevision: number, index: number): Promise<ToggleResponse> {
    return this.request("POST", `/projects/${id}/descriptions/${did}/select-candidate`, {
      base_revision: baseRevision,
      index,
    });
  }

  uploadRecording(
    id: string,
    did: string,
    baseRevision: number,
    wavBase64: string,
    alignment: Array<[number, number]>,
  ): Promise<{ revision: number }> {
    return this.request("POST", `/projects/${id}/descriptions/${did}/recording`, {
      base_revision: baseRevision,
      wav_base64: wavBase64,
      alignment,
    });
  }
}

function isRecord(x: unknown): x is Record<string, unknown> {
  return typeof x === "object" && x !== null;
}
