// Survey participation: walk the invited terms collecting 1-5 ratings and
// optional comments; each submission is one API call.

import type { RegistryClient } from "../api.js";
import type { SurveyCreated } from "../types.js";
import { el } from "./badges.js";

export interface SurveyHandlers {
  onRespond: (term: string, rating: number, comment: string) => Promise<void>;
}

export function surveyView(
  survey: { id: string; term_ids: string[]; questions: string[] },
  labels: Map<string, string>,
  handlers: SurveyHandlers,
): HTMLElement {
  const root = el("article", "survey");
  root.appendChild(el("h2", "", `Survey ${survey.id}`));

  survey.term_ids.forEach((termId, index) => {
    const block = el("section", "survey-question");
    block.setAttribute("data-term", termId);
    block.appendChild(el("h3", "", labels.get(termId) ?? termId));
    block.appendChild(el("p", "question", survey.questions[index] ?? "How appropriate is this term?"));

    const scale = el("div", "rating-scale");
    for (let rating = 1; rating <= 5; rating++) {
      const button = el("button", "rating", String(rating));
      button.setAttribute("data-rating", String(rating));
      button.addEventListener("click", () => {
        const comment = (block.querySelector(".survey-comment") as HTMLInputElement).value;
        void handlers.onRespond(termId, rating, comment).then(() => {
          block.classList.add("answered");
          status.textContent = `rated ${rating}`;
        });
      });
      scale.appendChild(button);
    }
    block.appendChild(scale);
    const comment = el("input", "survey-comment") as HTMLInputElement;
    comment.placeholder = "optional comment";
    block.appendChild(comment);
    const status = el("p", "survey-status", "");
    block.appendChild(status);
    root.appendChild(block);
  });
  return root;
}

export async function loadSurveyLabels(
  client: RegistryClient,
  survey: SurveyCreated | { term_ids: string[] },
): Promise<Map<string, string>> {
  const labels = new Map<string, string>();
  const page = await client.browse({}, 1, 500);
  for (const item of page.items) {
    if (survey.term_ids.includes(item.id)) labels.set(item.id, item.label);
  }
  return labels;
}
