import type { NextStep, QuestionnaireAnswers, SessionCreated } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/**
 * Thin typed wrapper over the study endpoints. Every response body that
 * reaches the rest of the app goes through here, so tests can record the raw
 * traffic via the injected fetch.
 */
export class StudyApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.text();
    if (!response.ok) {
      let detail = body;
      try {
        detail = JSON.parse(body).detail ?? body;
      } catch {
        // plain-text error body
      }
      throw new ApiError(response.status, String(detail));
    }
    return JSON.parse(body) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(participant: string, ideology: string): Promise<SessionCreated> {
    return this.post("/api/study/sessions", { participant, ideology });
  }

  nextStep(sessionId: string): Promise<NextStep> {
    return this.request(`/api/study/sessions/${sessionId}/next`);
  }

  submitStance(sessionId: string, itemIndex: number, value: number): Promise<unknown> {
    return this.post(`/api/study/sessions/${sessionId}/stance`, {
      item_index: itemIndex,
      value,
    });
  }

  submitRanking(
    sessionId: string,
    itemIndex: number,
    ranks: Record<string, number>,
  ): Promise<unknown> {
    return this.post(`/api/study/sessions/${sessionId}/ranking`, {
      item_index: itemIndex,
      ranks,
    });
  }

  submitQuestionnaire(sessionId: string, answers: QuestionnaireAnswers): Promise<unknown> {
    return this.post(`/api/study/sessions/${sessionId}/questionnaire`, { answers });
  }
}
