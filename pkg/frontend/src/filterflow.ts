// The three-step browse flow: (1) pick filters, (2) see the filtered term
// list, (3) vote/comment on terms relative to the active filters.

import type { BrowseFilters, RegistryClient } from "./api.js";
import * as optimistic from "./optimistic.js";
import type { TermSummary } from "./types.js";

export class FilterFlow {
  filters: BrowseFilters = {};
  items: TermSummary[] = [];
  total = 0;
  page = 1;
  pages = 1;

  constructor(
    private client: RegistryClient,
    private pageSize = 50,
  ) {}

  /** Step 1 choices: distinct collections present in the registry. */
  async collections(): Promise<string[]> {
    const page = await this.client.browse({}, 1, 500);
    const seen = new Set<string>();
    for (const item of page.items) {
      if (item.collection) seen.add(item.collection);
    }
    return [...seen].sort();
  }

  /** Step 1 refinement choices: the schema elements the current selection's
   * terms relate to (their triple predicates). */
  async subjectOptions(sample = 5): Promise<string[]> {
    const found = new Set<string>();
    for (const item of this.items.slice(0, sample)) {
      const detail = await this.client.termDetail(item.ark);
      for (const triple of detail.triples) {
        if (triple.predicate.kind === "term" && triple.predicate.label) {
          found.add(triple.predicate.label);
        }
      }
    }
    return [...found].sort();
  }

  async refresh(): Promise<TermSummary[]> {
    const page = await this.client.browse(this.filters, this.page, this.pageSize);
    this.items = page.items;
    this.total = page.total;
    this.pages = page.pages;
    return this.items;
  }

  async chooseCollection(collection: string): Promise<TermSummary[]> {
    this.filters = { ...this.filters, collection };
    this.page = 1;
    return this.refresh();
  }

  async refineBySubject(subject: string): Promise<TermSummary[]> {
    this.filters = { ...this.filters, subject };
    this.page = 1;
    return this.refresh();
  }

  async clear(): Promise<TermSummary[]> {
    this.filters = {};
    this.page = 1;
    return this.refresh();
  }

  /** Step 3: vote straight from the list. The tally updates optimistically
   * and reconciles to the server's answer without a full reload. */
  voteFromList(ark: string, direction: "up" | "down"): Promise<void> {
    const item = this.items.find((candidate) => candidate.ark === ark);
    if (!item) return Promise.reject(new Error(`term ${ark} is not in the visible list`));
    return optimistic.run({
      apply: () => {
        const snapshot = { up: item.up_votes, down: item.down_votes };
        if (direction === "up") item.up_votes += 1;
        else item.down_votes += 1;
        return snapshot;
      },
      remote: () => this.client.vote(ark, direction),
      reconcile: (response) => {
        const term = (response as { term: TermSummary }).term;
        item.up_votes = term.up_votes;
        item.down_votes = term.down_votes;
        item.status = term.status;
        item.consensus_score = term.consensus_score;
      },
      rollback: (snapshot) => {
        item.up_votes = snapshot.up;
        item.down_votes = snapshot.down;
      },
    });
  }
}
