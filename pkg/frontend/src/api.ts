/**
 * Typed client for the morphkit HTTP contract. The client never interprets
 * linguistic content: payload strings pass through to the UI verbatim.
 */

export interface AnswerOption {
  key: string;
  label: string;
}

export interface QuestionPayload {
  id: string;
  prompt: string;
  answers: AnswerOption[];
}

export interface InferredPayload {
  pos: string;
  paradigm_id: string;
  flags: Record<string, string>;
  required_alternants: string[];
}

export interface SessionCreated {
  session_id: string;
  question: QuestionPayload;
}

export type AnswerResponse =
  | { question: QuestionPayload; inferred?: undefined }
  | { inferred: InferredPayload; question?: undefined };

export interface CommitResponse {
  entry_id: string;
}

export interface SegmentPayload {
  surface: string;
  piece: string;
  linker: string;
}

export interface AnalysisPayload {
  lemma: string;
  tag: string;
  provenance: string;
  segments: SegmentPayload[];
}

export interface AnalysesPayload {
  form: string;
  analyses: AnalysisPayload[];
}

export interface FormPayload {
  form: string;
  tag: string;
}

export interface FormsPayload {
  lemma: string;
  pos: string;
  forms: FormPayload[];
}

export interface CommitRequest {
  lemma: string;
  alternants?: Record<string, string>;
  prefix?: string;
  gloss?: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<never> {
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string };
    if (body && typeof body.error === "string") {
      message = body.error;
    }
  } catch {
    // keep the generic message
  }
  throw new ApiError(response.status, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path, { method: "GET" });
    if (!response.ok) {
      return parseError(response);
    }
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? null : JSON.stringify(body),
    });
    if (!response.ok) {
      return parseError(response);
    }
    return (await response.json()) as T;
  }

  createSession(): Promise<SessionCreated> {
    return this.post<SessionCreated>("/lexicon/session");
  }

  answer(sessionId: string, key: string): Promise<AnswerResponse> {
    return this.post<AnswerResponse>(
      `/lexicon/session/${encodeURIComponent(sessionId)}/answer`,
      { key },
    );
  }

  commit(sessionId: string, request: CommitRequest): Promise<CommitResponse> {
    return this.post<CommitResponse>(
      `/lexicon/session/${encodeURIComponent(sessionId)}/commit`,
      request,
    );
  }

  analyze(form: string): Promise<AnalysesPayload> {
    return this.get<AnalysesPayload>(
      `/analyze?form=${encodeURIComponent(form)}`,
    );
  }

  generate(lemma: string, pos: string): Promise<FormsPayload> {
    return this.get<FormsPayload>(
      `/generate?lemma=${encodeURIComponent(lemma)}&pos=${encodeURIComponent(pos)}`,
    );
  }
}
