"""Domain model: terms, triples, users, votes, comments, versions, sources,
moderator assignments, rescore events, notifications, surveys, ARK records.

All records are plain dataclasses; mutation goes through the operation layer
(core.py) so every change can emit a rescore event.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional


class TermStatus(str, enum.Enum):
    VERNACULAR = "vernacular"
    CANONICAL = "canonical"
    DEPRECATED = "deprecated"


class VoteDirection(str, enum.Enum):
    UP = "up"
    DOWN = "down"


class EventKind(str, enum.Enum):
    VOTE = "vote"
    COMMENT = "comment"
    EDIT = "edit"
    IMPORT = "import"
    REPUTATION_CHANGE = "reputation_change"
    SWEEP = "sweep"


class AuditOutcome(str, enum.Enum):
    UNCHANGED = "unchanged"
    CHANGED = "changed"
    UNREACHABLE = "unreachable"


class NotificationKind(str, enum.Enum):
    TERM_EDIT = "term_edit"
    RELATED_TERM_ADDED = "related_term_added"
    STATUS_CHANGE = "status_change"
    THRESHOLD_CROSSING = "threshold_crossing"
    SURVEY_INVITE = "survey_invite"
    DEPRECATION_NOTICE = "deprecation_notice"


class Channel(str, enum.Enum):
    IN_APP = "in_app"
    DIGEST_OUTBOX = "digest_outbox"
    IMMEDIATE_OUTBOX = "immediate_outbox"


class SurveyAudience(str, enum.Enum):
    FOLLOWERS = "followers"
    LINK_TOKEN = "link_token"


class VoterRole(str, enum.Enum):
    PLAIN = "plain"
    FOLLOWED_BY_CUSTODIAN = "followed_by_custodian"
    MODERATOR = "moderator"


class StabilityBand(str, enum.Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"


@dataclass
class Rights:
    """CC0 marker or a link to an external rights statement."""

    kind: str = "cc0"  # "cc0" | "external"
    link: Optional[str] = None


@dataclass
class Term:
    id: str
    ark: str
    label: str
    definition: str
    contributor: str
    custodian: str
    created: datetime
    modified: datetime
    last_interaction: datetime
    status: TermStatus = TermStatus.VERNACULAR
    examples: list[str] = field(default_factory=list)  # triple ids
    source: Optional[str] = None  # SourceRecord id
    rights: Rights = field(default_factory=Rights)
    consensus_score: float = 0.5
    stability_score: float = 0.0
    applicability_score: float = 1.0
    # applicability value at the moment of the last interaction; the effective
    # score decays from this base, which keeps sweeps idempotent
    applicability_base: float = 1.0
    flagged: bool = False
    current_version: int = 1


@dataclass(frozen=True)
class Triple:
    """Subject-predicate-object row. Subject is always a term id; predicate is
    a term id or an absolute IRI; object is a term id or a typed literal."""

    id: str
    subject: str
    predicate: str
    object: str
    object_is_literal: bool = False


@dataclass
class User:
    id: str
    handle: str
    member_since: datetime
    last_seen: datetime
    display_name: str = ""
    location: str = ""
    external_links: list[tuple[str, str]] = field(default_factory=list)
    followers: set[str] = field(default_factory=set)
    following: set[str] = field(default_factory=set)
    action_log: list[tuple[str, datetime]] = field(default_factory=list)
    reputation: float = 1.0
    is_admin: bool = False
    tracked_terms: set[str] = field(default_factory=set)
    notify_channel: Channel = Channel.DIGEST_OUTBOX
    threshold_bands: list[float] = field(default_factory=lambda: [0.25, 0.75])

    @property
    def profile_complete(self) -> bool:
        return bool(self.display_name and self.location and self.external_links)


@dataclass
class Vote:
    user: str
    term: str
    direction: VoteDirection
    cast_at: datetime


@dataclass
class Comment:
    id: str
    user: str
    term: str
    body: str
    posted_at: datetime
    tags: list[str] = field(default_factory=list)
    is_review_request: bool = False


@dataclass
class TermVersion:
    """Immutable snapshot of a term at a version; only replaced_by is written
    later, when the next version supersedes this one."""

    term: str
    version: int
    label: str
    definition: str
    change_note: str
    created_at: datetime
    replaces: Optional[int] = None
    replaced_by: Optional[int] = None


@dataclass
class SourceRecord:
    id: str
    url: str
    content_hash: str = ""
    hash_algorithm: str = "sha256"
    fetched_at: Optional[datetime] = None
    rights_link: Optional[str] = None
    collection_id: Optional[str] = None
    # last audit outcome; "unreachable" penalties fire only on the transition
    last_outcome: Optional[AuditOutcome] = None


@dataclass
class ModeratorAssignment:
    id: str
    custodian: str
    moderator: str
    term_group: set[str] = field(default_factory=set)


@dataclass
class RescoreEvent:
    kind: EventKind
    term: Optional[str] = None
    user: Optional[str] = None
    enqueued_at: Optional[datetime] = None

    @property
    def dedupe_key(self) -> str:
        return f"{self.kind.value}:{self.term or '-'}:{self.user or '-'}"


@dataclass
class Notification:
    id: str
    recipient: str
    kind: NotificationKind
    subject_id: str
    created_at: datetime
    delivered: bool = False
    channel: Channel = Channel.IN_APP


@dataclass
class SurveyResponse:
    responder: str  # user id or "token:<...>" for link participants
    term: str
    rating: int
    comment: str = ""


@dataclass
class Survey:
    id: str
    creator: str
    term_ids: list[str]
    questions: list[str]
    audience: SurveyAudience
    created_at: datetime
    token: Optional[str] = None
    invited: set[str] = field(default_factory=set)
    responses: list[SurveyResponse] = field(default_factory=list)
    closed: bool = False


@dataclass
class ArkRecord:
    ark: str
    target_kind: str  # "term" | "schema" | "collection"
    target_id: str
    minted_at: datetime


@dataclass
class PersistenceStatement:
    ark: str
    created: datetime
    modified: datetime
    status: TermStatus
    current_version: int
    stability_band: StabilityBand
    statement_text: str


@dataclass
class AuditResult:
    source: str
    outcome: AuditOutcome
    checked_at: datetime
    new_hash: Optional[str] = None
