// Application shell: hash router, session handling, and the wiring between
// views and the API client. Server responses are the only source of truth;
// optimistic changes reconcile against them.

import { ApiError, RegistryClient } from "./api.js";
import { FilterFlow } from "./filterflow.js";
import * as optimistic from "./optimistic.js";
import { parse, serialize, withFilters, clearedFilters, type ViewState } from "./state.js";
import type { Profile, TermSummary } from "./types.js";
import { el } from "./views/badges.js";
import { moderationPanel } from "./views/moderationPanel.js";
import { profileView } from "./views/profile.js";
import { surveyView, loadSurveyLabels } from "./views/surveyView.js";
import { termDetailView } from "./views/termDetail.js";
import { termList, updateTally } from "./views/termList.js";
import { trackedDashboard } from "./views/trackedDashboard.js";

const API_BASE = (window as { VOCABREG_API?: string }).VOCABREG_API ?? "http://127.0.0.1:8000";

export class App {
  client: RegistryClient;
  flow: FilterFlow;
  state: ViewState = { route: { kind: "terms" }, filters: {}, page: 1 };

  constructor(
    private root: HTMLElement,
    baseUrl: string = API_BASE,
  ) {
    this.client = new RegistryClient(baseUrl);
    this.flow = new FilterFlow(this.client);
    const stored = localStorage.getItem("vocabreg-session");
    if (stored) this.client.session = JSON.parse(stored);
  }

  start(): void {
    window.addEventListener("hashchange", () => {
      void this.render(parse(location.hash));
    });
    void this.render(parse(location.hash || "#/terms"));
  }

  navigate(state: ViewState): void {
    this.state = state;
    const hash = serialize(state);
    if (location.hash !== hash) {
      location.hash = hash; // hashchange triggers render
    } else {
      void this.render(state);
    }
  }

  async render(state: ViewState): Promise<void> {
    this.state = state;
    this.root.textContent = "";
    this.root.appendChild(this.chrome());
    const body = el("main", "view");
    this.root.appendChild(body);
    try {
      switch (state.route.kind) {
        case "terms":
          await this.renderTerms(body);
          break;
        case "term":
          await this.renderTerm(body, state.route.ark);
          break;
        case "profile":
          await this.renderProfile(body, state.route.handle);
          break;
        case "tracked":
          await this.renderTracked(body);
          break;
        case "survey":
          await this.renderSurvey(body, state.route.id);
          break;
        case "moderation":
          await this.renderModeration(body);
          break;
        case "login":
          this.renderLogin(body);
          break;
      }
    } catch (error) {
      body.appendChild(this.errorBox(error));
    }
  }

  private chrome(): HTMLElement {
    const bar = el("nav", "top-bar");
    const links: [string, string][] = [
      ["Browse", "#/terms"],
      ["Tracked", "#/tracked"],
      ["Moderation", "#/moderation"],
    ];
    for (const [label, href] of links) {
      const link = el("a", "nav-link", label);
      link.setAttribute("href", href);
      bar.appendChild(link);
    }
    const session = this.client.session;
    if (session) {
      const me = el("a", "nav-link nav-me", session.handle);
      me.setAttribute("href", `#/users/${session.handle}`);
      bar.appendChild(me);
      const out = el("button", "nav-logout", "log out");
      out.addEventListener("click", () => {
        this.client.logout();
        localStorage.removeItem("vocabreg-session");
        this.navigate({ ...this.state });
      });
      bar.appendChild(out);
    } else {
      const login = el("a", "nav-link", "log in");
      login.setAttribute("href", "#/login");
      bar.appendChild(login);
    }
    return bar;
  }

  private errorBox(error: unknown): HTMLElement {
    const message =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    const box = el("div", "error-box", message);
    const retry = el("button", "retry", "retry");
    retry.addEventListener("click", () => void this.render(this.state));
    box.appendChild(retry);
    return box;
  }

  // -- browse / filter flow -------------------------------------------------

  private async renderTerms(body: HTMLElement): Promise<void> {
    this.flow.filters = { ...this.state.filters };
    this.flow.page = this.state.page;
    await this.flow.refresh();

    body.appendChild(await this.filterPanel());
    const listHost = el("div", "list-host");
    body.appendChild(listHost);
    this.mountList(listHost);
  }

  private async filterPanel(): Promise<HTMLElement> {
    const panel = el("section", "filter-panel");
    panel.appendChild(el("h3", "", "Step 1: choose filters"));

    const option = (text: string, value: string): HTMLOptionElement => {
      const node = el("option", "", text) as HTMLOptionElement;
      node.value = value;
      return node;
    };

    const collections = await this.flow.collections();
    const collectionSelect = el("select", "filter-collection") as HTMLSelectElement;
    collectionSelect.appendChild(option("all collections", ""));
    for (const collection of collections) {
      collectionSelect.appendChild(option(collection, collection));
    }
    collectionSelect.value = this.state.filters.collection ?? "";
    collectionSelect.addEventListener("change", () => {
      this.navigate(withFilters(this.state, {
        collection: collectionSelect.value || undefined,
        subject: undefined,
      }));
    });
    panel.appendChild(collectionSelect);

    const subjectSelect = el("select", "filter-subject") as HTMLSelectElement;
    subjectSelect.appendChild(option("all subjects", ""));
    if (this.state.filters.collection) {
      for (const subject of await this.flow.subjectOptions()) {
        subjectSelect.appendChild(option(subject, subject));
      }
    }
    subjectSelect.value = this.state.filters.subject ?? "";
    subjectSelect.addEventListener("change", () => {
      this.navigate(withFilters(this.state, { subject: subjectSelect.value || undefined }));
    });
    panel.appendChild(subjectSelect);

    const statusSelect = el("select", "filter-status") as HTMLSelectElement;
    statusSelect.appendChild(option("any status", ""));
    for (const status of ["vernacular", "canonical", "deprecated"]) {
      statusSelect.appendChild(option(status, status));
    }
    statusSelect.value = this.state.filters.status ?? "";
    statusSelect.addEventListener("change", () => {
      this.navigate(withFilters(this.state, { status: statusSelect.value || undefined }));
    });
    panel.appendChild(statusSelect);

    const clear = el("button", "clear-filters", "clear filters");
    clear.addEventListener("click", () => this.navigate(clearedFilters(this.state)));
    panel.appendChild(clear);

    panel.appendChild(el("p", "result-count",
                         `Step 2: ${this.flow.total} term(s) match`));
    return panel;
  }

  private mountList(host: HTMLElement): void {
    host.textContent = "";
    const view = termList(this.flow.items, {
      onOpen: (ark) => this.navigate({ ...this.state, route: { kind: "term", ark } }),
      onVote: (ark, direction) => {
        void this.flow.voteFromList(ark, direction).then(() => {
          const item = this.flow.items.find((candidate) => candidate.ark === ark);
          if (item) updateTally(view, item);
        });
        const item = this.flow.items.find((candidate) => candidate.ark === ark);
        if (item) updateTally(view, item); // optimistic paint
      },
      onComment: (ark, text) => {
        void this.client.comment(ark, text).catch((error) => {
          host.appendChild(this.errorBox(error));
        });
      },
    });
    host.appendChild(view);
  }

  // -- term detail ------------------------------------------------------------

  private async renderTerm(body: HTMLElement, ark: string): Promise<void> {
    const detail = await this.client.termDetail(ark);
    const me = this.client.session?.handle;
    const view = termDetailView(detail, {
      isContributor: me === detail.contributor,
      canEdit: me === detail.contributor || me === detail.custodian,
      onOpenProfile: (handle) =>
        this.navigate({ ...this.state, route: { kind: "profile", handle } }),
      onVote: (direction) => {
        void optimistic.run({
          apply: () => {
            const snapshot = { up: detail.up_votes, down: detail.down_votes };
            if (direction === "up") detail.up_votes += 1;
            else detail.down_votes += 1;
            return snapshot;
          },
          remote: () => this.client.vote(ark, direction),
          reconcile: (response) => {
            const term = (response as { term: TermSummary }).term;
            detail.up_votes = term.up_votes;
            detail.down_votes = term.down_votes;
            void this.render(this.state);
          },
          rollback: (snapshot) => {
            detail.up_votes = snapshot.up;
            detail.down_votes = snapshot.down;
            void this.render(this.state);
          },
          onError: (error) => body.appendChild(this.errorBox(error)),
        });
      },
      onComment: (text, review) => {
        void this.client
          .comment(ark, text, review)
          .then(() => this.render(this.state))
          .catch((error) => body.appendChild(this.errorBox(error)));
      },
      onTrack: () => {
        void this.client
          .track(ark)
          .catch((error) => body.appendChild(this.errorBox(error)));
      },
      onRevise: (definition, note) => {
        void this.client
          .revise(ark, { definition, change_note: note })
          .then(() => this.render(this.state))
          .catch((error) => body.appendChild(this.errorBox(error)));
      },
    });
    body.appendChild(view);
  }

  // -- profile ------------------------------------------------------------------

  private async renderProfile(body: HTMLElement, handle: string): Promise<void> {
    const profile = await this.client.profile(handle);
    body.appendChild(
      profileView(profile, {
        isSelf: this.client.session?.handle === profile.handle,
        onOpenTerm: (ark) => this.navigate({ ...this.state, route: { kind: "term", ark } }),
        onFollow: (target) => {
          void this.client
            .follow(target)
            .then(() => this.render(this.state))
            .catch((error) => body.appendChild(this.errorBox(error)));
        },
      }),
    );
  }

  // -- tracked dashboard -----------------------------------------------------------

  private async renderTracked(body: HTMLElement): Promise<void> {
    const session = this.client.session;
    if (!session) {
      this.renderLogin(body);
      return;
    }
    const profile = await this.client.profile(session.handle);
    const page = await this.client.browse({}, 1, 500);
    const summaries = new Map(page.items.map((item) => [item.id, item]));
    const feed = await this.client.notifications();
    body.appendChild(
      trackedDashboard(profile.tracked_terms, summaries, feed.notifications, (ark) =>
        this.navigate({ ...this.state, route: { kind: "term", ark } }),
      ),
    );
  }

  // -- surveys ------------------------------------------------------------------------

  private async renderSurvey(body: HTMLElement, surveyId: string): Promise<void> {
    const params = new URLSearchParams(location.hash.split("?")[1] ?? "");
    const token = params.get("token") ?? undefined;
    // invited terms arrive via the notification subject; the view only needs
    // ids and labels, fetched through the public browse surface
    const page = await this.client.browse({}, 1, 500);
    const labels = new Map(page.items.map((item) => [item.id, item.label]));
    const termIds = (params.get("terms") ?? "").split(",").filter(Boolean);
    body.appendChild(
      surveyView(
        { id: surveyId, term_ids: termIds, questions: [] },
        labels,
        {
          onRespond: (term, rating, comment) =>
            this.client.respondSurvey(surveyId, term, rating, comment, token).then(() => undefined),
        },
      ),
    );
  }

  // -- moderation -----------------------------------------------------------------------

  private async renderModeration(body: HTMLElement): Promise<void> {
    const session = this.client.session;
    if (!session) {
      this.renderLogin(body);
      return;
    }
    const me: Profile = await this.client.profile(session.handle);
    body.appendChild(
      moderationPanel(me, me.my_terms, {
        onAssign: (moderator, termArks) => this.client.assignModerator(moderator, termArks),
      }),
    );
  }

  // -- login ------------------------------------------------------------------------------

  private renderLogin(body: HTMLElement): void {
    const form = el("form", "login-form");
    const handle = el("input", "login-handle") as HTMLInputElement;
    handle.placeholder = "handle";
    const secret = el("input", "login-secret") as HTMLInputElement;
    secret.type = "password";
    secret.placeholder = "secret";
    const submit = el("button", "login-submit", "log in");
    submit.type = "submit";
    const status = el("p", "login-status", "");
    form.append(handle, secret, submit, status);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.client
        .login(handle.value, secret.value)
        .then((session) => {
          localStorage.setItem("vocabreg-session", JSON.stringify(session));
          this.navigate({ ...this.state, route: { kind: "terms" } });
        })
        .catch((error: Error) => {
          status.textContent = error.message;
        });
    });
    body.appendChild(form);
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  if (root) new App(root).start();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
