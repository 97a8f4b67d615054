import { moveCard } from "./ranking.js";
import type {
  QuestionnaireAnswers,
  QuestionnaireStep,
  RankingStep,
  StanceStep,
} from "./types.js";

export const QUESTION_TITLES: Record<string, string> = {
  own_views: "Your views",
  knowledge: "Your knowledge",
  others_views: "Others' views",
  effectiveness: "Effectiveness",
};

export const QUESTION_ORDER = ["own_views", "knowledge", "others_views", "effectiveness"];

export function conditionIntro(condition: string, questionId: string): string {
  const clause =
    condition === "challenging"
      ? "When arguments contested your stance on the topic"
      : "When arguments supported your stance on the topic";
  if (questionId === "effectiveness") {
    return `${clause}, which of the above three was most important for you to judge about effectiveness:`;
  }
  return `${clause}, which of the following arguments did you see as more effective:`;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderProgress(root: HTMLElement, done: number, total: number): void {
  const bar = el("p", "progress", `Item ${Math.min(done + 1, total)} of ${total}`);
  root.appendChild(bar);
}

/** Five-point stance form; submit stays disabled until a value is picked and
 * the selection survives a failed submission for retry. */
export function renderStanceForm(
  root: HTMLElement,
  step: StanceStep,
  onSubmit: (value: number) => Promise<void>,
): void {
  root.appendChild(el("h2", "topic", `Topic: ${step.topic}`));
  root.appendChild(
    el("p", "prompt", "Before reading the arguments, how do you assess your own stance on this topic?"),
  );
  const form = el("form", "stance-form");
  let chosen: number | null = null;
  const submit = el("button", "submit", "Submit stance");
  submit.type = "submit";
  submit.disabled = true;
  for (const value of [1, 2, 3, 4, 5]) {
    const label = el("label", "likert");
    const radio = el("input");
    radio.type = "radio";
    radio.name = "stance";
    radio.value = String(value);
    radio.addEventListener("change", () => {
      chosen = value;
      submit.disabled = false;
    });
    label.appendChild(radio);
    label.appendChild(
      el("span", undefined, `${value} (${step.scale[String(value)] ?? ""})`),
    );
    form.appendChild(label);
  }
  const error = el("p", "error");
  form.appendChild(submit);
  form.appendChild(error);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    if (chosen === null) return;
    submit.disabled = true;
    try {
      await onSubmit(chosen);
    } catch (failure) {
      // Keep the selection; offer a retry.
      error.textContent = `Could not submit (${String(failure)}). Try again.`;
      submit.disabled = false;
    }
  });
  root.appendChild(form);
}

/** Three blinded argument cards with move up/down reordering. Equal ranks are
 * impossible by construction; the card order is the submitted ranking. */
export function renderRankingBoard(
  root: HTMLElement,
  step: RankingStep,
  onSubmit: (arrangement: string[]) => Promise<void>,
): void {
  root.appendChild(el("h2", "topic", `Topic: ${step.topic}`));
  root.appendChild(
    el(
      "p",
      "prompt",
      "Read the three arguments and order them by how effective you find them (most effective first).",
    ),
  );
  let arrangement = step.arguments.map((a) => a.key);
  const board = el("div", "board");
  const byKey = new Map(step.arguments.map((a) => [a.key, a]));

  const redraw = () => {
    board.replaceChildren();
    arrangement.forEach((key, position) => {
      const argument = byKey.get(key)!;
      const card = el("article", "card");
      card.dataset.key = key;
      const header = el("header");
      header.appendChild(el("strong", undefined, `Rank ${position + 1} — Argument ${key}`));
      const up = el("button", "move", "Move up");
      up.type = "button";
      up.disabled = position === 0;
      up.addEventListener("click", () => {
        arrangement = moveCard(arrangement, position, position - 1);
        redraw();
      });
      const down = el("button", "move", "Move down");
      down.type = "button";
      down.disabled = position === arrangement.length - 1;
      down.addEventListener("click", () => {
        arrangement = moveCard(arrangement, position, position + 1);
        redraw();
      });
      header.appendChild(up);
      header.appendChild(down);
      card.appendChild(header);
      card.appendChild(el("p", "intro", argument.intro));
      for (const paragraph of argument.paragraphs) {
        card.appendChild(el("p", "paragraph", paragraph));
      }
      board.appendChild(card);
    });
  };
  redraw();
  root.appendChild(board);

  const submit = el("button", "submit", "Submit ranking");
  submit.type = "button";
  const error = el("p", "error");
  submit.addEventListener("click", async () => {
    submit.disabled = true;
    try {
      await onSubmit(arrangement);
    } catch (failure) {
      error.textContent = `Could not submit (${String(failure)}). Try again.`;
      submit.disabled = false;
    }
  });
  root.appendChild(submit);
  root.appendChild(error);
}

/** Four questions, asked once per condition with the exact option texts the
 * server provides. Submission unlocks only when all eight are answered. */
export function renderQuestionnaire(
  root: HTMLElement,
  step: QuestionnaireStep,
  draft: QuestionnaireAnswers,
  onDraftChange: (answers: QuestionnaireAnswers) => void,
  onSubmit: (answers: QuestionnaireAnswers) => Promise<void>,
): void {
  root.appendChild(el("h2", "topic", "Final questionnaire"));
  const answers: QuestionnaireAnswers = JSON.parse(JSON.stringify(draft));
  const submit = el("button", "submit", "Submit questionnaire");
  submit.type = "button";
  const questionIds = QUESTION_ORDER.filter((q) => q in step.questions);

  const updateSubmit = () => {
    submit.disabled = !step.conditions.every((condition) =>
      questionIds.every((q) => Number.isInteger(answers[condition]?.[q])),
    );
  };

  for (const condition of step.conditions) {
    const section = el("section", "condition");
    section.appendChild(
      el("h3", undefined, condition === "challenging" ? "Challenging arguments" : "Empowering arguments"),
    );
    for (const questionId of questionIds) {
      const block = el("fieldset", "question");
      block.appendChild(el("legend", undefined, QUESTION_TITLES[questionId] ?? questionId));
      block.appendChild(el("p", "prompt", conditionIntro(condition, questionId)));
      step.questions[questionId].forEach((option, optionIndex) => {
        const label = el("label", "option");
        const radio = el("input");
        radio.type = "radio";
        radio.name = `${condition}-${questionId}`;
        radio.checked = answers[condition]?.[questionId] === optionIndex;
        radio.addEventListener("change", () => {
          answers[condition] = { ...(answers[condition] ?? {}), [questionId]: optionIndex };
          onDraftChange(answers);
          updateSubmit();
        });
        label.appendChild(radio);
        label.appendChild(el("span", undefined, option));
        block.appendChild(label);
      });
      section.appendChild(block);
    }
    root.appendChild(section);
  }
  const error = el("p", "error");
  updateSubmit();
  submit.addEventListener("click", async () => {
    submit.disabled = true;
    try {
      await onSubmit(answers);
    } catch (failure) {
      error.textContent = `Could not submit (${String(failure)}). Try again.`;
      submit.disabled = false;
    }
  });
  root.appendChild(submit);
  root.appendChild(error);
}

export function renderDone(root: HTMLElement): void {
  root.appendChild(el("h2", "topic", "All done"));
  root.appendChild(
    el("p", "prompt", "Thank you for taking part. You can close this window now."),
  );
}
