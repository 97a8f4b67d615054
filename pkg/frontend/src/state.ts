import { ApiError, StudyApi } from "./api.js";
import { isPermutationOf, ranksFromArrangement } from "./ranking.js";
import type { NextStep, QuestionnaireAnswers, RankingStep } from "./types.js";

/**
 * Client-side session driver. The server's `next` endpoint is authoritative:
 * every submission is acknowledged first and the view state is re-fetched
 * afterwards, so a reload (or a 409 from a stale tab) always converges to the
 * server's view of the session.
 */
export class SessionController {
  private current: NextStep | null = null;

  constructor(
    private readonly api: StudyApi,
    readonly sessionId: string,
  ) {}

  static async create(
    api: StudyApi,
    participant: string,
    ideology: string,
  ): Promise<SessionController> {
    const created = await api.createSession(participant, ideology);
    const controller = new SessionController(api, created.session_id);
    await controller.refresh();
    return controller;
  }

  get step(): NextStep {
    if (this.current === null) {
      throw new Error("session not loaded; call refresh() first");
    }
    return this.current;
  }

  get progress(): { done: number; total: number } {
    return { done: this.step.items_done, total: this.step.items_total };
  }

  async refresh(): Promise<NextStep> {
    this.current = await this.api.nextStep(this.sessionId);
    return this.current;
  }

  /** Submit, then converge on the server state; 409 means another submission
   * already landed, in which case the refreshed view is the answer. */
  private async submitAndAdvance(send: () => Promise<unknown>): Promise<NextStep> {
    try {
      await send();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        return this.refresh();
      }
      throw error;
    }
    return this.refresh();
  }

  submitStance(value: number): Promise<NextStep> {
    const step = this.step;
    if (step.step !== "stance") {
      throw new Error(`cannot submit a stance during the ${step.step} step`);
    }
    return this.submitAndAdvance(() =>
      this.api.submitStance(this.sessionId, step.item_index, value),
    );
  }

  submitArrangement(arrangement: string[]): Promise<NextStep> {
    const step = this.step;
    if (step.step !== "ranking") {
      throw new Error(`cannot submit a ranking during the ${step.step} step`);
    }
    const keys = (step as RankingStep).arguments.map((a) => a.key);
    if (!isPermutationOf(arrangement, keys)) {
      throw new Error(`arrangement ${arrangement.join(",")} is not a total order of ${keys.join(",")}`);
    }
    return this.submitAndAdvance(() =>
      this.api.submitRanking(this.sessionId, step.item_index, ranksFromArrangement(arrangement)),
    );
  }

  submitQuestionnaire(answers: QuestionnaireAnswers): Promise<NextStep> {
    const step = this.step;
    if (step.step !== "questionnaire") {
      throw new Error(`cannot submit the questionnaire during the ${step.step} step`);
    }
    return this.submitAndAdvance(() =>
      this.api.submitQuestionnaire(this.sessionId, answers),
    );
  }
}
