"""In-process store: tables for every record kind, per-term write locks, the
rescore FIFO queue with dedupe, and JSON snapshot persistence.

Any store with per-term serialized transactions and a durable deduplicating
FIFO queue satisfies the persistence contract; this one keeps everything in
dictionaries guarded by locks and snapshots to a single JSON file.
"""

from __future__ import annotations

import json
import threading
from collections import deque
from contextlib import contextmanager
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterator, Optional

from . import models as m
from .errors import NotFound


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


class Store:
    def __init__(self, clock: Callable[[], datetime] = utcnow, outbox_path: Optional[Path] = None):
        self.clock = clock
        self.outbox_path = Path(outbox_path) if outbox_path else None

        self.users: dict[str, m.User] = {}
        self.terms: dict[str, m.Term] = {}
        self.triples: dict[str, m.Triple] = {}
        self.votes: dict[tuple[str, str], m.Vote] = {}
        self.comments: dict[str, m.Comment] = {}
        self.versions: dict[tuple[str, int], m.TermVersion] = {}
        self.sources: dict[str, m.SourceRecord] = {}
        self.moderators: dict[str, m.ModeratorAssignment] = {}
        self.notifications: dict[str, m.Notification] = {}
        self.surveys: dict[str, m.Survey] = {}
        self.ark_records: dict[str, m.ArkRecord] = {}
        self.ark_by_target: dict[tuple[str, str], str] = {}
        self.ark_counter: int = 0
        self.credentials: dict[str, tuple[str, str]] = {}  # user id -> (salt hex, digest hex)
        self.sessions: dict[str, tuple[str, datetime]] = {}  # token -> (user id, expiry)

        self._counters: dict[str, int] = {}
        self._queue: deque[m.RescoreEvent] = deque()
        self._pending_keys: set[str] = set()
        self._votes_by_term: dict[str, dict[str, m.Vote]] = {}

        self._registry_lock = threading.RLock()
        self._queue_lock = threading.Lock()
        self._ark_lock = threading.Lock()
        self._consumer_lock = threading.Lock()
        self._term_locks: dict[str, threading.RLock] = {}

    # -- ids, locks ---------------------------------------------------------

    def new_id(self, prefix: str) -> str:
        with self._registry_lock:
            n = self._counters.get(prefix, 0) + 1
            self._counters[prefix] = n
            return f"{prefix}{n}"

    @contextmanager
    def term_lock(self, term_id: str) -> Iterator[None]:
        """Serializes mutations on a single term; reads stay lock-free."""
        with self._registry_lock:
            lock = self._term_locks.setdefault(term_id, threading.RLock())
        with lock:
            yield

    # -- lookups ------------------------------------------------------------

    def user(self, user_id: str) -> m.User:
        u = self.users.get(user_id)
        if u is None:
            raise NotFound(f"unknown user {user_id!r}")
        return u

    def user_by_handle(self, handle: str) -> Optional[m.User]:
        for u in self.users.values():
            if u.handle == handle:
                return u
        return None

    def find_user(self, ref: str) -> m.User:
        """Lookup by id, falling back to handle (the HTTP surface accepts both)."""
        u = self.users.get(ref) or self.user_by_handle(ref)
        if u is None:
            raise NotFound(f"unknown user {ref!r}")
        return u

    def term(self, term_id: str) -> m.Term:
        t = self.terms.get(term_id)
        if t is None:
            raise NotFound(f"unknown term {term_id!r}")
        return t

    def source(self, source_id: str) -> m.SourceRecord:
        s = self.sources.get(source_id)
        if s is None:
            raise NotFound(f"unknown source {source_id!r}")
        return s

    def put_vote(self, vote: m.Vote) -> None:
        self.votes[(vote.user, vote.term)] = vote
        self._votes_by_term.setdefault(vote.term, {})[vote.user] = vote

    def votes_for(self, term_id: str) -> list[m.Vote]:
        return list(self._votes_by_term.get(term_id, {}).values())

    def comments_for(self, term_id: str) -> list[m.Comment]:
        return sorted((c for c in self.comments.values() if c.term == term_id), key=lambda c: c.posted_at)

    def versions_for(self, term_id: str) -> list[m.TermVersion]:
        return sorted((v for (t, _), v in self.versions.items() if t == term_id), key=lambda v: v.version)

    def triples_about(self, term_id: str) -> list[m.Triple]:
        return [
            tr
            for tr in self.triples.values()
            if tr.subject == term_id
            or tr.predicate == term_id
            or (not tr.object_is_literal and tr.object == term_id)
        ]

    def has_triple(self, subject: str, predicate: str, obj: str) -> bool:
        return any(
            tr.subject == subject and tr.predicate == predicate and tr.object == obj
            for tr in self.triples.values()
        )

    def trackers_of(self, term_id: str) -> list[m.User]:
        return [u for u in self.users.values() if term_id in u.tracked_terms]

    def moderator_roles(self, term_id: str) -> set[str]:
        """User ids holding a moderator assignment that covers the term."""
        return {a.moderator for a in self.moderators.values() if term_id in a.term_group}

    # -- rescore queue ------------------------------------------------------

    def enqueue(self, event: m.RescoreEvent) -> bool:
        """FIFO enqueue; a pending event with the same dedupe key collapses
        into the existing one. Returns True when the event was added."""
        with self._queue_lock:
            if event.dedupe_key in self._pending_keys:
                return False
            if event.enqueued_at is None:
                event.enqueued_at = self.clock()
            self._queue.append(event)
            self._pending_keys.add(event.dedupe_key)
            return True

    def dequeue(self) -> Optional[m.RescoreEvent]:
        with self._queue_lock:
            if not self._queue:
                return None
            event = self._queue.popleft()
            self._pending_keys.discard(event.dedupe_key)
            return event

    def pending_events(self) -> list[m.RescoreEvent]:
        with self._queue_lock:
            return list(self._queue)

    def queue_size(self) -> int:
        return len(self._queue)

    # -- snapshot persistence -------------------------------------------------

    def save(self, path: str | Path) -> None:
        data = {
            "users": [_encode(u) for u in self.users.values()],
            "terms": [_encode(t) for t in self.terms.values()],
            "triples": [_encode(t) for t in self.triples.values()],
            "votes": [_encode(v) for v in self.votes.values()],
            "comments": [_encode(c) for c in self.comments.values()],
            "versions": [_encode(v) for v in self.versions.values()],
            "sources": [_encode(s) for s in self.sources.values()],
            "moderators": [_encode(a) for a in self.moderators.values()],
            "notifications": [_encode(n) for n in self.notifications.values()],
            "surveys": [_encode(s) for s in self.surveys.values()],
            "ark_records": [_encode(r) for r in self.ark_records.values()],
            "ark_counter": self.ark_counter,
            "credentials": {k: list(v) for k, v in self.credentials.items()},
            "counters": dict(self._counters),
            "queue": [_encode(e) for e in self.pending_events()],
        }
        p = Path(path)
        tmp = p.with_suffix(p.suffix + ".tmp")
        tmp.write_text(json.dumps(data, indent=1, sort_keys=True))
        tmp.replace(p)

    @classmethod
    def load(cls, path: str | Path, clock: Callable[[], datetime] = utcnow,
             outbox_path: Optional[Path] = None) -> "Store":
        store = cls(clock=clock, outbox_path=outbox_path)
        data = json.loads(Path(path).read_text())
        for row in data.get("users", []):
            u = _decode_user(row)
            store.users[u.id] = u
        for row in data.get("terms", []):
            t = _decode_term(row)
            store.terms[t.id] = t
        for row in data.get("triples", []):
            tr = m.Triple(**row)
            store.triples[tr.id] = tr
        for row in data.get("votes", []):
            v = m.Vote(user=row["user"], term=row["term"],
                       direction=m.VoteDirection(row["direction"]), cast_at=_dt(row["cast_at"]))
            store.put_vote(v)
        for row in data.get("comments", []):
            c = m.Comment(id=row["id"], user=row["user"], term=row["term"], body=row["body"],
                          posted_at=_dt(row["posted_at"]), tags=list(row["tags"]),
                          is_review_request=row["is_review_request"])
            store.comments[c.id] = c
        for row in data.get("versions", []):
            v = m.TermVersion(term=row["term"], version=row["version"], label=row["label"],
                              definition=row["definition"], change_note=row["change_note"],
                              created_at=_dt(row["created_at"]), replaces=row["replaces"],
                              replaced_by=row["replaced_by"])
            store.versions[(v.term, v.version)] = v
        for row in data.get("sources", []):
            s = m.SourceRecord(id=row["id"], url=row["url"], content_hash=row["content_hash"],
                               hash_algorithm=row["hash_algorithm"],
                               fetched_at=_dt(row["fetched_at"]) if row["fetched_at"] else None,
                               rights_link=row["rights_link"], collection_id=row["collection_id"],
                               last_outcome=m.AuditOutcome(row["last_outcome"]) if row["last_outcome"] else None)
            store.sources[s.id] = s
        for row in data.get("moderators", []):
            a = m.ModeratorAssignment(id=row["id"], custodian=row["custodian"],
                                      moderator=row["moderator"], term_group=set(row["term_group"]))
            store.moderators[a.id] = a
        for row in data.get("notifications", []):
            n = m.Notification(id=row["id"], recipient=row["recipient"],
                               kind=m.NotificationKind(row["kind"]), subject_id=row["subject_id"],
                               created_at=_dt(row["created_at"]), delivered=row["delivered"],
                               channel=m.Channel(row["channel"]))
            store.notifications[n.id] = n
        for row in data.get("surveys", []):
            s = m.Survey(id=row["id"], creator=row["creator"], term_ids=list(row["term_ids"]),
                         questions=list(row["questions"]), audience=m.SurveyAudience(row["audience"]),
                         created_at=_dt(row["created_at"]), token=row["token"],
                         invited=set(row["invited"]),
                         responses=[m.SurveyResponse(**r) for r in row["responses"]],
                         closed=row["closed"])
            store.surveys[s.id] = s
        for row in data.get("ark_records", []):
            r = m.ArkRecord(ark=row["ark"], target_kind=row["target_kind"],
                            target_id=row["target_id"], minted_at=_dt(row["minted_at"]))
            store.ark_records[r.ark] = r
            store.ark_by_target[(r.target_kind, r.target_id)] = r.ark
        store.ark_counter = data.get("ark_counter", 0)
        store.credentials = {k: (v[0], v[1]) for k, v in data.get("credentials", {}).items()}
        store._counters = dict(data.get("counters", {}))
        for row in data.get("queue", []):
            ev = m.RescoreEvent(kind=m.EventKind(row["kind"]), term=row["term"], user=row["user"],
                                enqueued_at=_dt(row["enqueued_at"]) if row["enqueued_at"] else None)
            store._queue.append(ev)
            store._pending_keys.add(ev.dedupe_key)
        return store


def _encode(obj) -> dict:
    # str-valued enums serialize as their value; datetimes and sets need help
    def default(o):
        if isinstance(o, datetime):
            return o.isoformat()
        if isinstance(o, set):
            return sorted(o)
        raise TypeError(f"cannot encode {o!r}")

    return json.loads(json.dumps(asdict(obj), default=default))


def _dt(s: str) -> datetime:
    return datetime.fromisoformat(s)


def _decode_user(row: dict) -> m.User:
    return m.User(
        id=row["id"],
        handle=row["handle"],
        member_since=_dt(row["member_since"]),
        last_seen=_dt(row["last_seen"]),
        display_name=row["display_name"],
        location=row["location"],
        external_links=[tuple(x) for x in row["external_links"]],
        followers=set(row["followers"]),
        following=set(row["following"]),
        action_log=[(kind, _dt(ts)) for kind, ts in row["action_log"]],
        reputation=row["reputation"],
        is_admin=row["is_admin"],
        tracked_terms=set(row["tracked_terms"]),
        notify_channel=m.Channel(row["notify_channel"]),
        threshold_bands=list(row["threshold_bands"]),
    )


def _decode_term(row: dict) -> m.Term:
    return m.Term(
        id=row["id"],
        ark=row["ark"],
        label=row["label"],
        definition=row["definition"],
        contributor=row["contributor"],
        custodian=row["custodian"],
        created=_dt(row["created"]),
        modified=_dt(row["modified"]),
        last_interaction=_dt(row["last_interaction"]),
        status=m.TermStatus(row["status"]),
        examples=list(row["examples"]),
        source=row["source"],
        rights=m.Rights(**row["rights"]),
        consensus_score=row["consensus_score"],
        stability_score=row["stability_score"],
        applicability_score=row["applicability_score"],
        applicability_base=row["applicability_base"],
        flagged=row["flagged"],
        current_version=row["current_version"],
    )
