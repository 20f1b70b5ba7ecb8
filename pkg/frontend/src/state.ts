// View state with URL round-tripping: every filter combination is
// deep-linkable and reloading reproduces identical results.

import type { BrowseFilters } from "./api.js";

export type Route =
  | { kind: "terms" }
  | { kind: "term"; ark: string }
  | { kind: "profile"; handle: string }
  | { kind: "tracked" }
  | { kind: "survey"; id: string }
  | { kind: "moderation" }
  | { kind: "login" };

export interface ViewState {
  route: Route;
  filters: BrowseFilters;
  page: number;
}

const FILTER_KEYS: (keyof BrowseFilters)[] = [
  "collection", "schema", "subject", "status", "tag", "contributor",
];

export function serialize(state: ViewState): string {
  let path: string;
  switch (state.route.kind) {
    case "terms": path = "/terms"; break;
    case "term": path = `/terms/${state.route.ark}`; break;
    case "profile": path = `/users/${state.route.handle}`; break;
    case "tracked": path = "/tracked"; break;
    case "survey": path = `/surveys/${state.route.id}`; break;
    case "moderation": path = "/moderation"; break;
    case "login": path = "/login"; break;
  }
  const params = new URLSearchParams();
  for (const key of FILTER_KEYS) {
    const value = state.filters[key];
    if (value) params.set(key, value);
  }
  if (state.page > 1) params.set("page", String(state.page));
  const query = params.toString();
  return "#" + path + (query ? `?${query}` : "");
}

export function parse(hash: string): ViewState {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const queryAt = raw.indexOf("?");
  const path = queryAt === -1 ? raw : raw.slice(0, queryAt);
  const params = new URLSearchParams(queryAt === -1 ? "" : raw.slice(queryAt + 1));

  const filters: BrowseFilters = {};
  for (const key of FILTER_KEYS) {
    const value = params.get(key);
    if (value) filters[key] = value;
  }
  const page = Math.max(1, Number(params.get("page") ?? "1") || 1);

  let route: Route = { kind: "terms" };
  if (path.startsWith("/terms/") && path.length > "/terms/".length) {
    route = { kind: "term", ark: path.slice("/terms/".length) };
  } else if (path.startsWith("/users/")) {
    route = { kind: "profile", handle: decodeURIComponent(path.slice("/users/".length)) };
  } else if (path === "/tracked") {
    route = { kind: "tracked" };
  } else if (path.startsWith("/surveys/")) {
    route = { kind: "survey", id: path.slice("/surveys/".length) };
  } else if (path === "/moderation") {
    route = { kind: "moderation" };
  } else if (path === "/login") {
    route = { kind: "login" };
  }
  return { route, filters, page };
}

export function withFilters(state: ViewState, patch: Partial<BrowseFilters>): ViewState {
  const filters = { ...state.filters };
  for (const [key, value] of Object.entries(patch) as [keyof BrowseFilters, string | undefined][]) {
    if (value) filters[key] = value;
    else delete filters[key];
  }
  return { ...state, filters, page: 1 };
}

export function clearedFilters(state: ViewState): ViewState {
  return { ...state, filters: {}, page: 1 };
}
