import type { QuestionnaireAnswers } from "./types.js";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

/** Questionnaire answers survive a reload via local storage, per session. */
export class DraftStore {
  constructor(private readonly storage: KeyValueStore) {}

  private key(sessionId: string): string {
    return `moralframe-questionnaire-${sessionId}`;
  }

  load(sessionId: string): QuestionnaireAnswers {
    const raw = this.storage.getItem(this.key(sessionId));
    if (!raw) {
      return {};
    }
    try {
      return JSON.parse(raw) as QuestionnaireAnswers;
    } catch {
      return {};
    }
  }

  save(sessionId: string, answers: QuestionnaireAnswers): void {
    this.storage.setItem(this.key(sessionId), JSON.stringify(answers));
  }

  clear(sessionId: string): void {
    this.storage.removeItem(this.key(sessionId));
  }
}

export function isComplete(
  answers: QuestionnaireAnswers,
  conditions: string[],
  questionIds: string[],
): boolean {
  return conditions.every((condition) =>
    questionIds.every((q) => Number.isInteger(answers[condition]?.[q])),
  );
}
