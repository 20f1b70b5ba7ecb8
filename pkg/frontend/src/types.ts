// Payload shapes for the registry API.

export type TermStatus = "vernacular" | "canonical" | "deprecated";

export interface TermSummary {
  id: string;
  ark: string;
  label: string;
  excerpt: string;
  status: TermStatus;
  consensus_score: number;
  stability_score: number;
  applicability_score: number;
  flagged: boolean;
  up_votes: number;
  down_votes: number;
  version: number;
  collection: string | null;
}

export interface BrowsePage {
  total: number;
  page: number;
  pages: number;
  page_size: number;
  items: TermSummary[];
}

export interface TermVersionRow {
  version: number;
  label: string;
  definition: string;
  change_note: string;
  created_at: string;
  replaces: number | null;
  replaced_by: number | null;
}

export interface CommentRow {
  id: string;
  user: string;
  body: string;
  tags: string[];
  posted_at: string;
  is_review_request: boolean;
}

export interface TripleRef {
  kind: "term" | "iri" | "literal";
  id?: string;
  ark?: string;
  label?: string;
  value?: string;
}

export interface TripleRow {
  id: string;
  subject: TripleRef;
  predicate: TripleRef;
  object: TripleRef;
}

export interface TermDetail {
  id: string;
  ark: string;
  label: string;
  definition: string;
  status: TermStatus;
  flagged: boolean;
  contributor: string;
  custodian: string;
  rights: { kind: string; link: string | null };
  created: string;
  modified: string;
  consensus_score: number;
  stability_score: number;
  applicability_score: number;
  up_votes: number;
  down_votes: number;
  current_version: number;
  versions: TermVersionRow[];
  comments: CommentRow[];
  triples: TripleRow[];
  source: {
    id: string;
    url: string;
    hash_algorithm: string;
    content_hash: string;
    last_audit: string | null;
    collection: string | null;
  } | null;
  persistence_statement: string;
  stability_band: "high" | "medium" | "low";
  moderators: string[];
}

export interface TermBrief {
  id: string;
  ark: string;
  label: string;
  status: TermStatus;
}

export interface Profile {
  id: string;
  handle: string;
  display_name: string;
  location: string;
  external_links: { service: string; url: string }[];
  profile_complete: boolean;
  member_since: string;
  last_seen: string;
  reputation: number;
  followers: string[];
  following: string[];
  my_terms: TermBrief[];
  tracked_terms: TermBrief[];
  terms_by_followed: TermBrief[];
  deprecated_terms: TermBrief[];
  down_voted_terms: TermBrief[];
}

export interface NotificationRow {
  id: string;
  kind: string;
  subject_id: string;
  created_at: string;
  delivered: boolean;
  channel: string;
}

export interface SurveyCreated {
  id: string;
  audience: string;
  term_ids: string[];
  questions: string[];
  invited: string[];
  token?: string;
}

export interface SurveyResults {
  survey: string;
  closed: boolean;
  terms: Record<string, { responses: number; mean_rating: number | null; comments: string[] }>;
}

export interface Session {
  token: string;
  user_id: string;
  handle: string;
}
