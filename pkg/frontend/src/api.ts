// Typed client for the registry API. Every UI mutation maps to exactly one
// call here; no client-side state is authoritative.

import type {
  BrowsePage,
  NotificationRow,
  Profile,
  Session,
  SurveyCreated,
  SurveyResults,
  TermDetail,
  TermSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

export interface BrowseFilters {
  collection?: string;
  schema?: string;
  subject?: string;
  status?: string;
  tag?: string;
  contributor?: string;
}

export class RegistryClient {
  session: Session | null = null;

  constructor(public baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { accept: "application/json" };
    if (body !== undefined) headers["content-type"] = "application/json";
    if (this.session) headers.authorization = `Bearer ${this.session.token}`;
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const err = payload?.error ?? { code: "http_error", message: response.statusText };
      throw new ApiError(err.code, err.message, response.status);
    }
    return payload as T;
  }

  async login(handle: string, secret: string): Promise<Session> {
    this.session = await this.request<Session>("POST", "/auth", { handle, secret });
    return this.session;
  }

  logout(): void {
    this.session = null;
  }

  register(handle: string, secret: string, display_name = "", location = ""): Promise<Profile> {
    return this.request("POST", "/users", { handle, secret, display_name, location });
  }

  browse(filters: BrowseFilters = {}, page = 1, pageSize = 20): Promise<BrowsePage> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filters)) {
      if (value) params.set(key, value);
    }
    params.set("page", String(page));
    params.set("page_size", String(pageSize));
    return this.request("GET", `/terms?${params}`);
  }

  termDetail(ark: string): Promise<TermDetail> {
    return this.request("GET", `/terms/${ark}`);
  }

  propose(label: string, definition: string): Promise<TermDetail> {
    return this.request("POST", "/terms", { label, definition });
  }

  revise(ark: string, fields: { label?: string; definition?: string; change_note?: string }) {
    return this.request<{ version: number; term: TermSummary }>("PUT", `/terms/${ark}`, fields);
  }

  vote(ark: string, direction: "up" | "down"): Promise<{ term: TermSummary; your_vote: string }> {
    return this.request("POST", `/terms/${ark}/vote`, { direction });
  }

  comment(ark: string, body: string, isReviewRequest = false) {
    return this.request<{ id: string; tags: string[] }>("POST", `/terms/${ark}/comments`, {
      body,
      is_review_request: isReviewRequest,
    });
  }

  track(ark: string): Promise<{ tracked_terms: string[] }> {
    return this.request("POST", `/terms/${ark}/track`);
  }

  follow(handleOrId: string): Promise<{ following: string[] }> {
    return this.request("POST", `/users/${handleOrId}/follow`);
  }

  profile(handleOrId: string): Promise<Profile> {
    return this.request("GET", `/users/${handleOrId}`);
  }

  notifications(): Promise<{ notifications: NotificationRow[] }> {
    return this.request("GET", "/notifications");
  }

  suggestTags(prefix: string): Promise<{ suggestions: { tag: string; uses: number }[] }> {
    return this.request("GET", `/tags/suggest?prefix=${encodeURIComponent(prefix)}`);
  }

  createSurvey(termArks: string[], audience: "followers" | "link_token" = "followers") {
    return this.request<SurveyCreated>("POST", "/surveys", {
      term_ids: termArks,
      audience,
    });
  }

  respondSurvey(surveyId: string, term: string, rating: number, comment = "", token?: string) {
    return this.request<{ term: string; rating: number }>(
      "POST",
      `/surveys/${surveyId}/responses`,
      { term, rating, comment, token },
    );
  }

  surveyResults(surveyId: string): Promise<SurveyResults> {
    return this.request("GET", `/surveys/${surveyId}/results`);
  }

  assignModerator(moderator: string, termArks: string[]) {
    return this.request<{ id: string; moderator: string; term_ids: string[] }>(
      "POST",
      "/moderators",
      { moderator, term_ids: termArks },
    );
  }

  resolveArk(ark: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/${ark}`);
  }
}
