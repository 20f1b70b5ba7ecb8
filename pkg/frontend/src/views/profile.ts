// Profile page: activity info, followers, contributed terms, tracked terms,
// terms created by followed users, and the deprecation list.

import type { Profile, TermBrief } from "../types.js";
import { el, statusBadge } from "./badges.js";

export interface ProfileHandlers {
  onOpenTerm: (ark: string) => void;
  onFollow?: (handle: string) => void;
  isSelf: boolean;
}

export function profileView(profile: Profile, handlers: ProfileHandlers): HTMLElement {
  const root = el("article", "profile");

  const head = el("header", "profile-head");
  head.appendChild(el("h2", "", profile.handle));
  if (profile.display_name) {
    head.appendChild(el("p", "display-name",
                        profile.display_name + (profile.location ? ` from ${profile.location}` : "")));
  }
  root.appendChild(head);

  const activity = el("section", "activity");
  activity.appendChild(el("p", "member-since", `Member since ${formatDate(profile.member_since)}`));
  activity.appendChild(el("p", "last-seen", `Last seen ${formatDate(profile.last_seen)}`));
  activity.appendChild(el("p", "reputation", `Reputation ${profile.reputation.toFixed(2)}`));
  root.appendChild(activity);

  if (profile.external_links.length) {
    const links = el("section", "external-links");
    for (const link of profile.external_links) {
      const anchor = el("a", "external-link", link.service);
      anchor.setAttribute("href", link.url);
      links.appendChild(anchor);
    }
    root.appendChild(links);
  }

  root.appendChild(handleSection("Followed by", "followers", profile.followers));
  root.appendChild(termSection("My terms", "my-terms", profile.my_terms, handlers));
  root.appendChild(termSection("Tracked terms", "tracked-terms", profile.tracked_terms, handlers));
  root.appendChild(termSection("Terms created by followed users", "terms-by-followed",
                               profile.terms_by_followed, handlers));
  root.appendChild(handleSection("Following", "following", profile.following));
  if (profile.deprecated_terms.length || profile.down_voted_terms.length) {
    root.appendChild(termSection("Deprecated terms", "deprecated-terms",
                                 profile.deprecated_terms, handlers));
    root.appendChild(termSection("Down-voted terms", "down-voted-terms",
                                 profile.down_voted_terms, handlers));
  }

  if (!handlers.isSelf && handlers.onFollow) {
    const follow = el("button", "follow-button", "follow");
    follow.addEventListener("click", () => handlers.onFollow!(profile.handle));
    root.appendChild(follow);
  }
  return root;
}

function formatDate(iso: string): string {
  return new Date(iso).toUTCString();
}

function handleSection(title: string, className: string, handles: string[]): HTMLElement {
  const section = el("section", className);
  section.appendChild(el("h3", "", title));
  const list = el("ul");
  for (const handle of handles) {
    const entry = el("li");
    const link = el("a", "profile-link", handle);
    link.setAttribute("href", `#/users/${handle}`);
    entry.appendChild(link);
    list.appendChild(entry);
  }
  if (!handles.length) list.appendChild(el("li", "empty-state", "nobody yet"));
  section.appendChild(list);
  return section;
}

function termSection(
  title: string,
  className: string,
  terms: TermBrief[],
  handlers: ProfileHandlers,
): HTMLElement {
  const section = el("section", className);
  section.appendChild(el("h3", "", title));
  const list = el("ul");
  for (const term of terms) {
    const entry = el("li", "term-brief");
    const link = el("a", "term-link", term.label);
    link.setAttribute("href", `#/terms/${term.ark}`);
    link.addEventListener("click", (event) => {
      event.preventDefault();
      handlers.onOpenTerm(term.ark);
    });
    entry.appendChild(link);
    entry.appendChild(statusBadge(term.status));
    list.appendChild(entry);
  }
  if (!terms.length) list.appendChild(el("li", "empty-state", "none yet"));
  section.appendChild(list);
  return section;
}
