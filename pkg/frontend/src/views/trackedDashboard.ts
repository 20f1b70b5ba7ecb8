// Tracked-terms dashboard: the user's tracked set with live scores plus
// their notification feed.

import type { NotificationRow, TermBrief, TermSummary } from "../types.js";
import { el, statusBadge, scoreline } from "./badges.js";

export function trackedDashboard(
  tracked: TermBrief[],
  summaries: Map<string, TermSummary>,
  notifications: NotificationRow[],
  onOpenTerm: (ark: string) => void,
): HTMLElement {
  const root = el("article", "tracked-dashboard");
  root.appendChild(el("h2", "", "Tracked terms"));

  const list = el("ul", "tracked-list");
  for (const brief of tracked) {
    const entry = el("li", "tracked-term");
    const link = el("a", "term-link", brief.label);
    link.setAttribute("href", `#/terms/${brief.ark}`);
    link.addEventListener("click", (event) => {
      event.preventDefault();
      onOpenTerm(brief.ark);
    });
    entry.appendChild(link);
    entry.appendChild(statusBadge(brief.status));
    const summary = summaries.get(brief.id);
    if (summary) {
      entry.appendChild(scoreline(
        summary.consensus_score, summary.stability_score, summary.applicability_score,
      ));
    }
    list.appendChild(entry);
  }
  if (!tracked.length) list.appendChild(el("li", "empty-state", "you are not tracking any terms"));
  root.appendChild(list);

  root.appendChild(el("h3", "", "Notifications"));
  const feed = el("ul", "notification-feed");
  for (const note of notifications) {
    const entry = el("li", `notification ${note.delivered ? "read" : "unread"}`);
    entry.textContent = `${note.kind}: ${note.subject_id} (${note.created_at})`;
    feed.appendChild(entry);
  }
  if (!notifications.length) feed.appendChild(el("li", "empty-state", "nothing new"));
  root.appendChild(feed);
  return root;
}
