// Payload types for the study API. The server never sends framing or moral
// metadata to this client; these types are the whole vocabulary it sees.

export type StepKind = "stance" | "ranking" | "questionnaire" | "done";

export interface StepBase {
  session_id: string;
  step: StepKind;
  items_total: number;
  items_done: number;
}

export interface StanceStep extends StepBase {
  step: "stance";
  item_index: number;
  topic: string;
  scale: Record<string, string>; // "1".."5" -> label
}

export interface BlindedArgument {
  key: string; // neutral display key: "A" | "B" | "C"
  intro: string;
  paragraphs: string[];
}

export interface RankingStep extends StepBase {
  step: "ranking";
  item_index: number;
  topic: string;
  stance_presented: string;
  arguments: BlindedArgument[];
}

export interface QuestionnaireStep extends StepBase {
  step: "questionnaire";
  questions: Record<string, string[]>; // question id -> option texts
  conditions: string[]; // "challenging" | "empowering"
}

export interface DoneStep extends StepBase {
  step: "done";
}

export type NextStep = StanceStep | RankingStep | QuestionnaireStep | DoneStep;

export interface SessionCreated {
  session_id: string;
  items_total: number;
}

/** condition -> question id -> chosen option index */
export type QuestionnaireAnswers = Record<string, Record<string, number>>;
