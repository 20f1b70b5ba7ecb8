"""Mutation operations over the store: registration, term life cycle, votes,
comments, moderation, the follow/track graph, and the status state machine.

Every mutation enqueues a rescore event; status writes happen only inside
apply_classification.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence

from . import ark as ark_registry
from . import notify, scoring
from .errors import Conflict, NotFound, PermissionDenied, ValidationFailed
from .models import (
    Comment,
    EventKind,
    ModeratorAssignment,
    NotificationKind,
    RescoreEvent,
    Term,
    TermStatus,
    TermVersion,
    Triple,
    User,
    Vote,
    VoteDirection,
)
from .store import Store


def register_user(
    store: Store,
    handle: str,
    secret: Optional[str] = None,
    display_name: str = "",
    location: str = "",
    external_links: Optional[Sequence[tuple[str, str]]] = None,
    is_admin: bool = False,
) -> User:
    if not handle.strip():
        raise ValidationFailed("handle must be non-empty")
    if store.user_by_handle(handle) is not None:
        raise Conflict(f"handle {handle!r} is taken")
    now = store.clock()
    user = User(
        id=store.new_id("u"),
        handle=handle,
        member_since=now,
        last_seen=now,
        display_name=display_name,
        location=location,
        external_links=list(external_links or []),
        is_admin=is_admin,
    )
    user.reputation = scoring.reputation(user.profile_complete, 0, 0)
    store.users[user.id] = user
    if secret is not None:
        from . import auth

        auth.set_credential(store, user.id, secret)
    return user


def record_action(store: Store, user_id: str, kind: str) -> None:
    user = store.user(user_id)
    now = store.clock()
    user.action_log.append((kind, now))
    user.last_seen = now


def _interact(store: Store, term: Term, thresholds: scoring.Thresholds) -> None:
    """Interaction bookkeeping: decay the applicability base to now, add the
    bonus, restart the decay clock."""
    now = store.clock()
    days = max(0.0, (now - term.last_interaction).total_seconds() / 86400.0)
    effective = scoring.applicability_decay(term.applicability_base, days, thresholds)
    term.applicability_base = scoring.interaction_bump(effective, thresholds)
    term.applicability_score = term.applicability_base
    term.last_interaction = now


def propose_term(
    store: Store,
    contributor: str,
    label: str,
    definition: str,
    examples: Optional[Iterable[tuple[str, str]]] = None,
    thresholds: Optional[scoring.Thresholds] = None,
    ark_config: Optional[ark_registry.ArkConfig] = None,
) -> Term:
    """Manual term entry: vernacular status, contributor as custodian, version
    1 written, a fresh ARK, and scores at their creation defaults. Stability
    starts at zero and is earned through elapsed unaltered time."""
    th = thresholds or scoring.Thresholds()
    user = store.user(contributor)
    if not label.strip():
        raise ValidationFailed("empty label")
    if not definition.strip():
        raise ValidationFailed("empty definition")
    for t in store.terms.values():
        if t.contributor == contributor and t.label == label:
            raise Conflict(f"{user.handle} already contributed a term labeled {label!r}")
    now = store.clock()
    term = Term(
        id=store.new_id("t"),
        ark="",
        label=label,
        definition=definition,
        contributor=contributor,
        custodian=contributor,
        created=now,
        modified=now,
        last_interaction=now,
        consensus_score=th.no_vote_default,
        stability_score=0.0,
        applicability_score=1.0,
        applicability_base=1.0,
    )
    term.ark = ark_registry.mint(store, "term", term.id, ark_config).ark
    store.terms[term.id] = term
    store.versions[(term.id, 1)] = TermVersion(
        term=term.id, version=1, label=label, definition=definition,
        change_note="initial definition", created_at=now,
    )
    for predicate, obj in examples or []:
        triple = add_triple(store, term.id, predicate, obj)
        term.examples.append(triple.id)
    record_action(store, contributor, "propose")
    store.enqueue(RescoreEvent(kind=EventKind.EDIT, term=term.id, user=contributor))
    return term


def add_triple(store: Store, subject: str, predicate: str, obj: str,
               object_is_literal: Optional[bool] = None) -> Triple:
    """Store one relationship row. The subject must be a term; the predicate a
    term id or absolute IRI; the object a term id or a literal. Duplicate
    rows are rejected."""
    store.term(subject)
    if predicate not in store.terms and not _is_absolute_iri(predicate):
        raise ValidationFailed(f"predicate {predicate!r} is neither a term nor an absolute IRI")
    if object_is_literal is None:
        object_is_literal = obj not in store.terms
    if store.has_triple(subject, predicate, obj):
        raise Conflict("duplicate triple")
    triple = Triple(
        id=store.new_id("tr"), subject=subject, predicate=predicate,
        object=obj, object_is_literal=object_is_literal,
    )
    store.triples[triple.id] = triple
    # trackers one hop away on either end of the new relation
    endpoints = {subject}
    if not object_is_literal and obj in store.terms:
        endpoints.add(obj)
    notified = set()
    for endpoint in sorted(endpoints):
        for tracker in store.trackers_of(endpoint):
            if tracker.id not in notified:
                notified.add(tracker.id)
                notify.emit(store, tracker.id, NotificationKind.RELATED_TERM_ADDED, endpoint)
    return triple


def _is_absolute_iri(value: str) -> bool:
    return bool(re.match(r"^[a-zA-Z][a-zA-Z0-9+.-]*:", value)) and " " not in value


def can_edit(user: User, term: Term) -> bool:
    """The permission table: contributor, custodian, or administrator.
    Moderators comment and vote with extra weight but do not edit."""
    return user.id in (term.contributor, term.custodian) or user.is_admin


def revise_term(
    store: Store,
    editor: str,
    term_id: str,
    new_label: Optional[str] = None,
    new_definition: Optional[str] = None,
    change_note: str = "",
    thresholds: Optional[scoring.Thresholds] = None,
) -> TermVersion:
    """Edit a term: a new dense version is written, the chain links updated,
    and the unaltered-since clock (hence accrued stability) resets."""
    th = thresholds or scoring.Thresholds()
    user = store.user(editor)
    with store.term_lock(term_id):
        term = store.term(term_id)
        if not can_edit(user, term):
            raise PermissionDenied(f"{user.handle} may not edit term {term.label!r}")
        label = new_label if new_label is not None else term.label
        definition = new_definition if new_definition is not None else term.definition
        if label == term.label and definition == term.definition:
            raise ValidationFailed("no-op edit: nothing changed")
        if not label.strip() or not definition.strip():
            raise ValidationFailed("label and definition must stay non-empty")
        now = store.clock()
        prior = term.current_version
        version = TermVersion(
            term=term.id, version=prior + 1, label=label, definition=definition,
            change_note=change_note, created_at=now, replaces=prior,
        )
        store.versions[(term.id, prior)].replaced_by = prior + 1
        store.versions[(term.id, prior + 1)] = version
        term.label = label
        term.definition = definition
        term.current_version = prior + 1
        term.modified = now
        term.stability_score = 0.0  # re-earned from the reset clock
        _interact(store, term, th)
    record_action(store, editor, "edit")
    notify.notify_trackers(store, term_id, NotificationKind.TERM_EDIT, exclude=editor)
    store.enqueue(RescoreEvent(kind=EventKind.EDIT, term=term_id, user=editor))
    return version


def record_vote(
    store: Store,
    user_id: str,
    term_id: str,
    direction: VoteDirection | str,
    thresholds: Optional[scoring.Thresholds] = None,
) -> Vote:
    """Upsert the user's vote on a term; re-voting replaces direction and
    timestamp. Contributors may not vote on their own terms."""
    th = thresholds or scoring.Thresholds()
    direction = VoteDirection(direction)
    user = store.user(user_id)
    with store.term_lock(term_id):
        term = store.term(term_id)
        if term.contributor == user.id:
            raise PermissionDenied("contributors may not vote on their own terms")
        vote = Vote(user=user.id, term=term.id, direction=direction, cast_at=store.clock())
        store.put_vote(vote)
        _interact(store, term, th)
    record_action(store, user_id, "vote")
    store.enqueue(RescoreEvent(kind=EventKind.VOTE, term=term_id, user=user_id))
    return vote


_TAG_TOKEN = re.compile(r"#\S+")


def extract_tags(body: str) -> list[str]:
    """'#'-prefixed tokens, lowercased, punctuation-stripped, deduplicated in
    order of first appearance."""
    tags: list[str] = []
    for raw in _TAG_TOKEN.findall(body):
        tag = re.sub(r"[^a-z0-9]", "", raw.lower())
        if tag and tag not in tags:
            tags.append(tag)
    return tags


def add_comment(
    store: Store,
    user_id: str,
    term_id: str,
    body: str,
    is_review_request: bool = False,
    thresholds: Optional[scoring.Thresholds] = None,
) -> Comment:
    th = thresholds or scoring.Thresholds()
    user = store.user(user_id)
    if not body.strip():
        raise ValidationFailed("empty comment body")
    with store.term_lock(term_id):
        term = store.term(term_id)
        comment = Comment(
            id=store.new_id("c"), user=user.id, term=term.id, body=body,
            posted_at=store.clock(), tags=extract_tags(body),
            is_review_request=is_review_request,
        )
        store.comments[comment.id] = comment
        _interact(store, term, th)
    record_action(store, user_id, "comment")
    # comment activity reuses the term-activity notification kind
    notify.notify_trackers(store, term_id, NotificationKind.TERM_EDIT, exclude=user_id)
    if is_review_request and term.contributor != user_id:
        notify.emit(store, term.contributor, NotificationKind.TERM_EDIT, term_id)
    store.enqueue(RescoreEvent(kind=EventKind.COMMENT, term=term_id, user=user_id))
    return comment


def apply_classification(
    store: Store,
    term_id: str,
    consensus: float,
    stability: float,
    thresholds: Optional[scoring.Thresholds] = None,
) -> TermStatus:
    """The only write path for term status. Persists the classification and
    emits status-change notifications; deprecation additionally produces the
    outbox invitation to update."""
    th = thresholds or scoring.Thresholds()
    new_status = scoring.classify(consensus, stability, th)
    with store.term_lock(term_id):
        term = store.term(term_id)
        old_status = term.status
        term.status = new_status
    if new_status is not old_status:
        recipients = {u.id for u in store.trackers_of(term_id)}
        recipients.add(term.contributor)
        for uid in sorted(recipients):
            notify.emit(store, uid, NotificationKind.STATUS_CHANGE, term_id)
        if new_status is TermStatus.DEPRECATED:
            note = notify.emit(store, term.contributor, NotificationKind.DEPRECATION_NOTICE, term_id)
            _force_outbox(store, note)
    return new_status


def _force_outbox(store: Store, note) -> None:
    """Deprecation invitations are always written to the durable outbox, even
    for in-app/digest users."""
    if not note.delivered:
        from .models import Channel

        if note.channel is not Channel.IMMEDIATE_OUTBOX:
            notify._append_outbox(store, [note])
            note.delivered = True


def assign_moderator(
    store: Store,
    custodian: str,
    moderator: str,
    term_group: Iterable[str] | str,
) -> ModeratorAssignment:
    """Custodians designate domain experts whose votes carry the moderator
    multiplier on the covered terms. A string group is a schema/collection
    selector resolved to the matching term ids now."""
    caller = store.user(custodian)
    store.user(moderator)
    if isinstance(term_group, str):
        ids = _resolve_group_selector(store, term_group)
    else:
        ids = set(term_group)
    if not ids:
        raise ValidationFailed("empty term group")
    for tid in ids:
        term = store.term(tid)
        if term.custodian != caller.id:
            raise PermissionDenied(
                f"{caller.handle} is not the custodian of term {term.label!r}"
            )
    assignment = ModeratorAssignment(
        id=store.new_id("ma"), custodian=custodian, moderator=moderator, term_group=ids,
    )
    store.moderators[assignment.id] = assignment
    return assignment


def _resolve_group_selector(store: Store, selector: str) -> set[str]:
    ids = set()
    for term in store.terms.values():
        if term.source is None:
            continue
        src = store.sources.get(term.source)
        if src is None:
            continue
        if term.source == selector or src.collection_id == selector:
            ids.add(term.id)
    return ids


def follow_user(store: Store, follower: str, followee: str) -> None:
    """Symmetric follow-graph update; idempotent, self-follow rejected. The
    followee's reputation gets requeued (follower count feeds it)."""
    if follower == followee:
        raise ValidationFailed("users cannot follow themselves")
    a = store.user(follower)
    b = store.user(followee)
    if b.id in a.following:
        return
    a.following.add(b.id)
    b.followers.add(a.id)
    record_action(store, follower, "follow")
    store.enqueue(RescoreEvent(kind=EventKind.REPUTATION_CHANGE, user=followee))


def track_term(store: Store, user_id: str, term_id: str,
               thresholds: Optional[scoring.Thresholds] = None) -> None:
    """Start tracking a term; idempotent."""
    th = thresholds or scoring.Thresholds()
    user = store.user(user_id)
    with store.term_lock(term_id):
        term = store.term(term_id)
        if term.id in user.tracked_terms:
            return
        user.tracked_terms.add(term.id)
        _interact(store, term, th)
    record_action(store, user_id, "track")
