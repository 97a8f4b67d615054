import { StudyApi } from "./api.js";
import { DraftStore } from "./drafts.js";
import { SessionController } from "./state.js";
import {
  renderDone,
  renderProgress,
  renderQuestionnaire,
  renderRankingBoard,
  renderStanceForm,
} from "./views.js";

const SESSION_KEY = "moralframe-session-id";

function appRoot(): HTMLElement {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  return root;
}

async function renderLoop(controller: SessionController, drafts: DraftStore): Promise<void> {
  const root = appRoot();
  root.replaceChildren();
  const step = controller.step;
  if (step.step !== "done") {
    renderProgress(root, step.items_done, step.items_total);
  }
  switch (step.step) {
    case "stance":
      renderStanceForm(root, step, async (value) => {
        await controller.submitStance(value);
        await renderLoop(controller, drafts);
      });
      break;
    case "ranking":
      renderRankingBoard(root, step, async (arrangement) => {
        await controller.submitArrangement(arrangement);
        await renderLoop(controller, drafts);
      });
      break;
    case "questionnaire":
      renderQuestionnaire(
        root,
        step,
        drafts.load(controller.sessionId),
        (answers) => drafts.save(controller.sessionId, answers),
        async (answers) => {
          await controller.submitQuestionnaire(answers);
          drafts.clear(controller.sessionId);
          await renderLoop(controller, drafts);
        },
      );
      break;
    case "done":
      renderDone(root);
      window.localStorage.removeItem(SESSION_KEY);
      break;
  }
}

function renderEntryForm(api: StudyApi, drafts: DraftStore): void {
  const root = appRoot();
  root.replaceChildren();
  const heading = document.createElement("h2");
  heading.textContent = "Join the argument ranking study";
  root.appendChild(heading);
  const form = document.createElement("form");
  form.innerHTML = `
    <label>Participant label <input name="participant" required></label>
    <label>Political ideology
      <select name="ideology">
        <option value="unknown">Prefer not to say / unsure</option>
        <option value="liberal">Liberal</option>
        <option value="conservative">Conservative</option>
      </select>
    </label>
    <p class="hint">If you know your typology quiz result, pick the closest match.</p>
    <button type="submit">Start</button>
    <p class="error"></p>
  `;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    try {
      const controller = await SessionController.create(
        api,
        String(data.get("participant") ?? ""),
        String(data.get("ideology") ?? "unknown"),
      );
      window.localStorage.setItem(SESSION_KEY, controller.sessionId);
      await renderLoop(controller, drafts);
    } catch (failure) {
      const error = form.querySelector(".error");
      if (error) error.textContent = String(failure);
    }
  });
  root.appendChild(form);
}

async function boot(): Promise<void> {
  const api = new StudyApi("");
  const drafts = new DraftStore(window.localStorage);
  const existing = window.localStorage.getItem(SESSION_KEY);
  if (existing) {
    // Resume: the server's next endpoint restores the exact step.
    try {
      const controller = new SessionController(api, existing);
      await controller.refresh();
      await renderLoop(controller, drafts);
      return;
    } catch {
      window.localStorage.removeItem(SESSION_KEY);
    }
  }
  renderEntryForm(api, drafts);
}

boot().catch((failure) => {
  const root = appRoot();
  root.textContent = `The study could not start: ${String(failure)}`;
});
