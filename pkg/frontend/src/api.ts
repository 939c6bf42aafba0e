/**
 * Typed client for the casdec session service.
 *
 * All functions take the service base URL explicitly so tests can point
 * the client at a mock `fetch` or a live server. No decoding, scoring, or
 * diffing happens here — the service owns all of that; the client only
 * shuttles JSON.
 */

export interface RougeScores {
  rouge1: number;
  rouge2: number;
  rougeL: number;
}

export interface DiffSpan {
  start: number;
  end: number;
  text: string;
}

export interface TokenDiff {
  added: DiffSpan[];
  removed: DiffSpan[];
}

export interface Iteration {
  index: number;
  constraints: string[];
  summary: string;
  tokens: string[];
  satisfied: boolean;
  fallback_used: boolean;
  raw_logprob: number;
  normalized_score: number;
  timestamp: number;
  rouge?: RougeScores;
  diff?: TokenDiff;
}

export interface SessionHandle {
  session_id: string;
  iteration: Iteration;
}

export interface SessionView {
  session_id: string;
  document: string;
  reference: string | null;
  beam_size: number;
  iterations: Iteration[];
}

export interface Suggestion {
  text: string;
  score: number;
  first_position: number;
  in_s_prime: boolean;
  selected: boolean;
  filtered_reason: string | null;
}

export interface ServiceErrorBody {
  code: string;
  message: string;
  detail: unknown;
}

export interface CreateSessionOptions {
  reference?: string;
  beam_size?: number;
  max_length?: number;
  length_penalty_alpha?: number;
}

/** Raised when the service answers with a non-2xx status. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ServiceErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
    this.name = "ApiError";
  }
}

export type FetchLike = typeof fetch;

async function request<T>(
  fetchImpl: FetchLike,
  url: string,
  init?: RequestInit,
): Promise<T> {
  const response = await fetchImpl(url, init);
  if (!response.ok) {
    let body: ServiceErrorBody;
    try {
      body = (await response.json()) as ServiceErrorBody;
    } catch {
      body = { code: "http_error", message: response.statusText, detail: null };
    }
    throw new ApiError(response.status, body);
  }
  return (await response.json()) as T;
}

export class SessionApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  createSession(
    document: string,
    options: CreateSessionOptions = {},
  ): Promise<SessionHandle> {
    return request<SessionHandle>(this.fetchImpl, `${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ document, ...options }),
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return request<SessionView>(
      this.fetchImpl,
      `${this.baseUrl}/sessions/${sessionId}`,
    );
  }

  getSuggestions(sessionId: string): Promise<{ suggestions: Suggestion[] }> {
    return request<{ suggestions: Suggestion[] }>(
      this.fetchImpl,
      `${this.baseUrl}/sessions/${sessionId}/suggestions`,
    );
  }

  regenerate(
    sessionId: string,
    constraints: string[],
  ): Promise<SessionHandle> {
    return request<SessionHandle>(
      this.fetchImpl,
      `${this.baseUrl}/sessions/${sessionId}/regenerate`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ constraints }),
      },
    );
  }

  getHistory(
    sessionId: string,
  ): Promise<{ session_id: string; iterations: Iteration[] }> {
    return request<{ session_id: string; iterations: Iteration[] }>(
      this.fetchImpl,
      `${this.baseUrl}/sessions/${sessionId}/history`,
    );
  }
}
