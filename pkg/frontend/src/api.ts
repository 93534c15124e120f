/** Typed client for the leasecheck HTTP gateway.
 *
 * Every method maps to one endpoint and returns the parsed JSON payload.
 * Non-2xx responses carry a {code, message} envelope; both fields are
 * preserved on the thrown ApiError so callers can branch on the code.
 */

export interface AttributeSchema {
  name: string;
  options: string[];
  question: string;
}

export interface ClaimSummary {
  claim_type: string;
  attributes: AttributeSchema[];
  law_count: number;
}

export interface Law {
  id: string;
  group: string;
  text: string;
  source: string;
}

export interface TraceStep {
  rule_id: string;
  head: string;
  body: [string, string][];
}

export type Outcome = "lawful" | "unlawful" | "undetermined";

export interface Verdict {
  outcome: Outcome;
  message: string;
  citations: Law[];
  trace: TraceStep[];
  missing_attributes: string[];
  explanation: string;
}

export interface Extraction {
  raw_pairs: Record<string, string>;
  provenance: string;
  warnings: string[];
  audit: string | null;
}

export interface AnalyzeResult extends Verdict {
  extraction: Extraction;
  timing: { extraction_ms: number; engine_ms: number };
}

export interface Question {
  attribute: string;
  prompt: string;
  options: string[];
  allows_unknown: boolean;
}

export interface SessionView {
  session_id: string;
  claim_type: string;
  state: string;
  answered: Record<string, string>;
  pending: string[];
  question: Question | null;
  warnings: string[];
}

export interface FinalizeResult {
  session_id: string;
  state: string;
  verdict: Verdict;
}

export interface Health {
  status: string;
  kb_fingerprint: string;
  laws: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function payloadOf(response: Response): Promise<unknown> {
  try {
    return await response.json();
  } catch {
    return null;
  }
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.base + path, init);
    } catch (error) {
      throw new ApiError(0, "unreachable", `gateway unreachable: ${String(error)}`);
    }
    const payload = await payloadOf(response);
    if (!response.ok) {
      const envelope = (payload ?? {}) as { code?: string; message?: string };
      throw new ApiError(
        response.status,
        envelope.code ?? "internal",
        envelope.message ?? response.statusText,
      );
    }
    return payload as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<Health> {
    return this.request("/api/health");
  }

  async claims(): Promise<ClaimSummary[]> {
    const view = await this.request<{ claims: ClaimSummary[] }>("/api/claims");
    return view.claims;
  }

  async laws(claimType: string): Promise<Law[]> {
    const view = await this.request<{ claim_type: string; laws: Law[] }>(
      `/api/laws/${encodeURIComponent(claimType)}`,
    );
    return view.laws;
  }

  analyze(claimType: string, caseText: string, extractor?: string): Promise<AnalyzeResult> {
    const body: Record<string, unknown> = { claim_type: claimType, case_text: caseText };
    if (extractor !== undefined) {
      body.extractor = extractor;
    }
    return this.post("/api/analyze", body);
  }

  startInterview(claimType: string, caseText?: string): Promise<SessionView> {
    const body: Record<string, unknown> = { claim_type: claimType };
    if (caseText !== undefined) {
      body.case_text = caseText;
    }
    return this.post("/api/interview/start", body);
  }

  nextQuestion(sessionId: string): Promise<{ state: string; complete: boolean; question: Question | null }> {
    return this.request(`/api/interview/${encodeURIComponent(sessionId)}/next`);
  }

  answer(sessionId: string, attribute: string, value: string, revise = false): Promise<SessionView> {
    return this.post(`/api/interview/${encodeURIComponent(sessionId)}/answer`, {
      attribute,
      value,
      revise,
    });
  }

  finalize(sessionId: string): Promise<FinalizeResult> {
    return this.post(`/api/interview/${encodeURIComponent(sessionId)}/finalize`, {});
  }
}
