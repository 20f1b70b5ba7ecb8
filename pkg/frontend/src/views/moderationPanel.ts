// Custodian moderation: pick a moderator (typically from followers) and the
// term group their votes should carry extra weight on. Hidden for
// non-custodians; permission errors surface verbatim from the API.

import type { Profile, TermBrief } from "../types.js";
import { el } from "./badges.js";

export interface ModerationHandlers {
  onAssign: (moderator: string, termArks: string[]) => Promise<{ id: string }>;
}

export function moderationPanel(
  me: Profile,
  curatedTerms: TermBrief[],
  handlers: ModerationHandlers,
): HTMLElement {
  const root = el("article", "moderation");
  root.appendChild(el("h2", "", "Moderation"));
  if (!curatedTerms.length) {
    root.appendChild(el("p", "empty-state", "You curate no terms, so there is nothing to moderate."));
    return root;
  }

  const picker = el("select", "moderator-picker") as HTMLSelectElement;
  const candidates = [...new Set([...me.followers, ...me.following])].sort();
  for (const handle of candidates) {
    const option = el("option", "", handle) as HTMLOptionElement;
    option.value = handle;
    picker.appendChild(option);
  }
  const manual = el("input", "moderator-manual") as HTMLInputElement;
  manual.placeholder = "or type a handle";

  const group = el("fieldset", "term-group");
  group.appendChild(el("legend", "", "Term group"));
  const boxes: HTMLInputElement[] = [];
  for (const term of curatedTerms) {
    const wrap = el("div", "term-choice");
    const box = el("input") as HTMLInputElement;
    box.type = "checkbox";
    box.value = term.ark;
    box.id = `mod-${term.id}`;
    const label = el("label", "", term.label);
    label.setAttribute("for", box.id);
    wrap.append(box, label);
    group.appendChild(wrap);
    boxes.push(box);
  }

  const assign = el("button", "assign-moderator", "assign moderator");
  const status = el("p", "moderation-status", "");
  assign.addEventListener("click", () => {
    const moderator = manual.value.trim() || picker.value;
    const chosen = boxes.filter((box) => box.checked).map((box) => box.value);
    handlers
      .onAssign(moderator, chosen)
      .then((result) => {
        status.textContent = `assigned (${result.id})`;
        status.className = "moderation-status ok";
      })
      .catch((error: Error) => {
        status.textContent = error.message;
        status.className = "moderation-status error";
      });
  });

  root.append(picker, manual, group, assign, status);
  return root;
}
