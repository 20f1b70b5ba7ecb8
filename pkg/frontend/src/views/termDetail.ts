// Term page: definition, scores with status badge, related terms, comment
// thread, version history toggle, ARK with copy affordance.

import type { TermDetail } from "../types.js";
import { el, flaggedIcon, scoreline, statusBadge } from "./badges.js";

export interface TermDetailHandlers {
  onVote: (direction: "up" | "down") => void;
  onComment: (body: string, review: boolean) => void;
  onTrack: () => void;
  onOpenProfile: (handle: string) => void;
  canEdit: boolean;
  onRevise?: (definition: string, note: string) => void;
  isContributor: boolean;
}

export function termDetailView(detail: TermDetail, handlers: TermDetailHandlers): HTMLElement {
  const root = el("article", "term-detail");

  const head = el("header", "term-detail-head");
  head.appendChild(el("h2", "", detail.label));
  head.appendChild(statusBadge(detail.status));
  if (detail.flagged) head.appendChild(flaggedIcon());
  root.appendChild(head);

  if (detail.status === "deprecated" && handlers.isContributor) {
    root.appendChild(el(
      "div", "banner banner-deprecated",
      "This term was deprecated by community vote. You are invited to update the entry.",
    ));
  }

  root.appendChild(el("p", "definition", detail.definition));
  root.appendChild(scoreline(detail.consensus_score, detail.stability_score,
                             detail.applicability_score));

  const ark = el("div", "ark-line");
  ark.appendChild(el("code", "ark", detail.ark));
  const copy = el("button", "copy-ark", "copy");
  copy.addEventListener("click", () => {
    void navigator.clipboard?.writeText(detail.ark);
  });
  ark.appendChild(copy);
  root.appendChild(ark);
  root.appendChild(el("p", "persistence", detail.persistence_statement));

  const people = el("p", "people");
  people.append("contributed by ");
  people.appendChild(profileLink(detail.contributor, handlers.onOpenProfile));
  people.append(", curated by ");
  people.appendChild(profileLink(detail.custodian, handlers.onOpenProfile));
  if (detail.moderators.length) {
    people.append(`, moderated by ${detail.moderators.join(", ")}`);
  }
  root.appendChild(people);

  if (detail.source) {
    const src = el("p", "source-line",
                   `source: ${detail.source.url} (last audit: ${detail.source.last_audit ?? "pending"})`);
    root.appendChild(src);
  }

  const controls = el("div", "vote-controls");
  const up = el("button", "vote-up", `▲ ${detail.up_votes}`);
  up.addEventListener("click", () => handlers.onVote("up"));
  const down = el("button", "vote-down", `▼ ${detail.down_votes}`);
  down.addEventListener("click", () => handlers.onVote("down"));
  const track = el("button", "track", "track");
  track.addEventListener("click", () => handlers.onTrack());
  controls.append(up, down, track);
  root.appendChild(controls);

  root.appendChild(relatedTerms(detail));
  root.appendChild(commentThread(detail, handlers));
  root.appendChild(versionHistory(detail));

  if (handlers.canEdit && handlers.onRevise) {
    root.appendChild(reviseForm(detail, handlers.onRevise));
  }
  return root;
}

function profileLink(handle: string, onOpen: (handle: string) => void): HTMLElement {
  const link = el("a", "profile-link", handle);
  link.setAttribute("href", `#/users/${handle}`);
  link.addEventListener("click", (event) => {
    event.preventDefault();
    onOpen(handle);
  });
  return link;
}

function relatedTerms(detail: TermDetail): HTMLElement {
  const section = el("section", "related-terms");
  section.appendChild(el("h3", "", "Related terms"));
  const list = el("ul");
  for (const triple of detail.triples) {
    const entry = el("li", "triple-row");
    const parts = [triple.subject, triple.predicate, triple.object].map((ref) =>
      ref.kind === "term" ? (ref.label ?? ref.id ?? "?") : (ref.value ?? "?"),
    );
    entry.textContent = parts.join(" → ");
    list.appendChild(entry);
  }
  if (!detail.triples.length) list.appendChild(el("li", "empty-state", "none yet"));
  section.appendChild(list);
  return section;
}

function commentThread(detail: TermDetail, handlers: TermDetailHandlers): HTMLElement {
  const section = el("section", "comments");
  section.appendChild(el("h3", "", `Comments (${detail.comments.length})`));
  const list = el("ul");
  for (const comment of detail.comments) {
    const entry = el("li", "comment");
    entry.appendChild(el("strong", "", comment.user));
    entry.append(` ${comment.body}`);
    if (comment.tags.length) {
      entry.appendChild(el("span", "tags", " " + comment.tags.map((t) => `#${t}`).join(" ")));
    }
    if (comment.is_review_request) entry.appendChild(el("em", "", " (review request)"));
    list.appendChild(entry);
  }
  section.appendChild(list);

  const box = el("textarea", "comment-box") as HTMLTextAreaElement;
  box.placeholder = "add a comment; use #tags";
  const review = el("input") as HTMLInputElement;
  review.type = "checkbox";
  review.id = "review-request";
  const reviewLabel = el("label", "", "request contributor review");
  reviewLabel.setAttribute("for", "review-request");
  const send = el("button", "comment-send", "post comment");
  send.addEventListener("click", () => {
    if (box.value.trim()) {
      handlers.onComment(box.value, review.checked);
      box.value = "";
    }
  });
  section.append(box, review, reviewLabel, send);
  return section;
}

function versionHistory(detail: TermDetail): HTMLElement {
  const section = el("section", "versions");
  const toggle = el("button", "version-toggle",
                    `version history (${detail.versions.length})`);
  const list = el("ol", "version-list");
  list.hidden = true;
  for (const version of detail.versions) {
    const entry = el("li", "version-entry");
    entry.textContent =
      `v${version.version}: ${version.definition}` +
      (version.change_note ? ` — ${version.change_note}` : "");
    list.appendChild(entry);
  }
  toggle.addEventListener("click", () => {
    list.hidden = !list.hidden;
  });
  section.append(toggle, list);
  return section;
}

function reviseForm(detail: TermDetail, onRevise: (definition: string, note: string) => void): HTMLElement {
  const form = el("section", "revise-form");
  form.appendChild(el("h3", "", "Revise definition"));
  const box = el("textarea", "revise-definition") as HTMLTextAreaElement;
  box.value = detail.definition;
  const note = el("input", "revise-note") as HTMLInputElement;
  note.placeholder = "change note";
  const save = el("button", "revise-save", "save new version");
  save.addEventListener("click", () => onRevise(box.value, note.value));
  form.append(box, note, save);
  return form;
}
