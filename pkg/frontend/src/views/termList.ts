// Step 2 + 3 of the filter flow: the filtered term list with vote and
// comment controls on every row.

import type { TermSummary } from "../types.js";
import { el, flaggedIcon, statusBadge } from "./badges.js";

export interface TermListHandlers {
  onVote: (ark: string, direction: "up" | "down") => void;
  onComment: (ark: string, body: string) => void;
  onOpen: (ark: string) => void;
}

export function termList(items: TermSummary[], handlers: TermListHandlers): HTMLElement {
  const root = el("section", "term-list");
  root.setAttribute("aria-label", "Vocabulary terms");
  if (items.length === 0) {
    root.appendChild(el("p", "empty-state", "No terms match the active filters."));
    return root;
  }
  for (const item of items) {
    root.appendChild(termRow(item, handlers));
  }
  return root;
}

function termRow(item: TermSummary, handlers: TermListHandlers): HTMLElement {
  const row = el("article", "term-row");
  row.setAttribute("data-ark", item.ark);

  const head = el("header", "term-row-head");
  const link = el("a", "term-label", item.label);
  link.href = `#/terms/${item.ark}`;
  link.addEventListener("click", (event) => {
    event.preventDefault();
    handlers.onOpen(item.ark);
  });
  head.appendChild(link);
  head.appendChild(statusBadge(item.status));
  if (item.flagged) head.appendChild(flaggedIcon());
  row.appendChild(head);

  row.appendChild(el("p", "term-excerpt", item.excerpt));

  const controls = el("div", "vote-controls");
  const up = el("button", "vote-up", `▲ ${item.up_votes}`);
  up.setAttribute("aria-label", `up-vote ${item.label}`);
  up.addEventListener("click", () => handlers.onVote(item.ark, "up"));
  const down = el("button", "vote-down", `▼ ${item.down_votes}`);
  down.setAttribute("aria-label", `down-vote ${item.label}`);
  down.addEventListener("click", () => handlers.onVote(item.ark, "down"));
  controls.appendChild(up);
  controls.appendChild(down);

  const commentBox = el("input", "comment-input") as HTMLInputElement;
  commentBox.placeholder = "comment (tags with #)";
  const send = el("button", "comment-send", "comment");
  send.addEventListener("click", () => {
    if (commentBox.value.trim()) {
      handlers.onComment(item.ark, commentBox.value);
      commentBox.value = "";
    }
  });
  controls.appendChild(commentBox);
  controls.appendChild(send);
  row.appendChild(controls);
  return row;
}

/** Refresh one row's tally in place after reconciliation. */
export function updateTally(root: HTMLElement, item: TermSummary): void {
  const row = root.querySelector(`[data-ark="${item.ark}"]`);
  if (!row) return;
  const up = row.querySelector(".vote-up");
  const down = row.querySelector(".vote-down");
  if (up) up.textContent = `▲ ${item.up_votes}`;
  if (down) down.textContent = `▼ ${item.down_votes}`;
  const badge = row.querySelector(".badge");
  if (badge) {
    badge.textContent = item.status;
    badge.className = `badge badge-${item.status}`;
    badge.setAttribute("data-status", item.status);
  }
}
