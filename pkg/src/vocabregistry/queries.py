"""Read-side assembly: filtered term browsing with stable ordering and
pagination, full term detail, and user profiles.
"""

from __future__ import annotations

from typing import Optional

from . import ark as ark_registry
from . import core
from .errors import NotFound
from .models import EventKind, RescoreEvent, Term, TermStatus, VoteDirection
from .scoring import Thresholds, tally
from .store import Store


def _term_tags(store: Store, term_id: str) -> set[str]:
    tags: set[str] = set()
    for comment in store.comments_for(term_id):
        tags.update(comment.tags)
    return tags


def _related_to(store: Store, term: Term, other_id: str) -> bool:
    for tr in store.triples.values():
        if tr.subject == term.id and (tr.predicate == other_id or (not tr.object_is_literal and tr.object == other_id)):
            return True
        if tr.subject == other_id and not tr.object_is_literal and tr.object == term.id:
            return True
    return False


def filter_terms(
    store: Store,
    collection: Optional[str] = None,
    schema: Optional[str] = None,
    subject: Optional[str] = None,
    status: Optional[str] = None,
    tag: Optional[str] = None,
    contributor: Optional[str] = None,
) -> list[Term]:
    """Conjunction of filters; unknown filter values yield an empty result
    rather than an error. Ordering is stable: score descending, then label."""
    terms = list(store.terms.values())

    if status is not None:
        try:
            wanted = TermStatus(status)
        except ValueError:
            return []
        terms = [t for t in terms if t.status is wanted]

    if collection is not None:
        def in_collection(t: Term) -> bool:
            src = store.sources.get(t.source) if t.source else None
            return src is not None and src.collection_id == collection
        terms = [t for t in terms if in_collection(t)]

    if schema is not None:
        terms = [t for t in terms if t.source == schema]

    if subject is not None:
        subj = store.terms.get(subject)
        if subj is None:
            for t in store.terms.values():
                if t.label.lower() == subject.lower():
                    subj = t
                    break
        if subj is None:
            return []
        terms = [t for t in terms if t.id != subj.id and _related_to(store, t, subj.id)]

    if tag is not None:
        wanted_tag = tag.lower()
        terms = [t for t in terms if wanted_tag in _term_tags(store, t.id)]

    if contributor is not None:
        try:
            user = store.find_user(contributor)
        except NotFound:
            return []
        terms = [t for t in terms if t.contributor == user.id]

    terms.sort(key=lambda t: (-t.consensus_score, t.label, t.id))
    return terms


def summarize(store: Store, term: Term, excerpt_length: int = 140) -> dict:
    up, down = tally([v.direction for v in store.votes_for(term.id)])
    definition = term.definition
    excerpt = definition if len(definition) <= excerpt_length else definition[: excerpt_length - 1] + "…"
    src = store.sources.get(term.source) if term.source else None
    return {
        "id": term.id,
        "ark": term.ark,
        "label": term.label,
        "excerpt": excerpt,
        "status": term.status.value,
        "consensus_score": term.consensus_score,
        "stability_score": term.stability_score,
        "applicability_score": term.applicability_score,
        "flagged": term.flagged,
        "up_votes": up,
        "down_votes": down,
        "version": term.current_version,
        "collection": src.collection_id if src else None,
    }


def browse(
    store: Store,
    page: int = 1,
    page_size: int = 20,
    **filters,
) -> dict:
    terms = filter_terms(store, **filters)
    total = len(terms)
    pages = max(1, -(-total // page_size))
    page = max(1, page)
    window = terms[(page - 1) * page_size: page * page_size]
    return {
        "total": total,
        "page": page,
        "pages": pages,
        "page_size": page_size,
        "items": [summarize(store, t) for t in window],
    }


def _render_triple(store: Store, triple) -> dict:
    def ref(value: str, literal: bool) -> dict:
        if not literal and value in store.terms:
            t = store.terms[value]
            return {"kind": "term", "id": t.id, "ark": t.ark, "label": t.label}
        return {"kind": "literal" if literal else "iri", "value": value}

    return {
        "id": triple.id,
        "subject": ref(triple.subject, False),
        "predicate": ref(triple.predicate, False),
        "object": ref(triple.object, triple.object_is_literal),
    }


def term_detail(
    store: Store,
    ref: str,
    thresholds: Optional[Thresholds] = None,
) -> dict:
    """Full record for a term addressed by ARK or id. Access counts as an
    interaction and, for sourced terms, enqueues an audit-on-access event
    (stale-while-revalidate: the response carries the last audit outcome)."""
    th = thresholds or Thresholds()
    term = store.terms.get(ref)
    if term is None:
        try:
            term = ark_registry.resolve_term(store, ref)
        except Exception:
            raise NotFound(f"unknown term {ref!r}")

    with store.term_lock(term.id):
        core._interact(store, term, th)
    if term.source is not None:
        store.enqueue(RescoreEvent(kind=EventKind.SWEEP, term=term.id))

    votes = store.votes_for(term.id)
    up, down = tally([v.direction for v in votes])
    versions = store.versions_for(term.id)
    src = store.sources.get(term.source) if term.source else None
    statement = ark_registry.persistence_statement(store, term.ark)
    contributor = store.users.get(term.contributor)
    custodian = store.users.get(term.custodian)
    return {
        "id": term.id,
        "ark": term.ark,
        "label": term.label,
        "definition": term.definition,
        "status": term.status.value,
        "flagged": term.flagged,
        "contributor": contributor.handle if contributor else term.contributor,
        "custodian": custodian.handle if custodian else term.custodian,
        "rights": {"kind": term.rights.kind, "link": term.rights.link},
        "created": term.created.isoformat(),
        "modified": term.modified.isoformat(),
        "consensus_score": term.consensus_score,
        "stability_score": term.stability_score,
        "applicability_score": term.applicability_score,
        "up_votes": up,
        "down_votes": down,
        "current_version": term.current_version,
        "versions": [
            {
                "version": v.version,
                "label": v.label,
                "definition": v.definition,
                "change_note": v.change_note,
                "created_at": v.created_at.isoformat(),
                "replaces": v.replaces,
                "replaced_by": v.replaced_by,
            }
            for v in versions
        ],
        "comments": [
            {
                "id": c.id,
                "user": store.users[c.user].handle if c.user in store.users else c.user,
                "body": c.body,
                "tags": c.tags,
                "posted_at": c.posted_at.isoformat(),
                "is_review_request": c.is_review_request,
            }
            for c in store.comments_for(term.id)
        ],
        "triples": [_render_triple(store, tr) for tr in store.triples_about(term.id)],
        "source": None if src is None else {
            "id": src.id,
            "url": src.url,
            "hash_algorithm": src.hash_algorithm,
            "content_hash": src.content_hash,
            "last_audit": src.last_outcome.value if src.last_outcome else None,
            "collection": src.collection_id,
        },
        "persistence_statement": statement.statement_text,
        "stability_band": statement.stability_band.value,
        "moderators": sorted(
            store.users[uid].handle
            for uid in store.moderator_roles(term.id) if uid in store.users
        ),
    }


def profile(store: Store, ref: str) -> dict:
    """Profile page data: activity, follow graph, contributed and tracked
    terms, terms by followed users, and the down-voted/deprecated lists."""
    user = store.find_user(ref)
    my_terms = sorted(
        (t for t in store.terms.values() if t.contributor == user.id),
        key=lambda t: t.label,
    )
    followed_terms = sorted(
        (t for t in store.terms.values() if t.contributor in user.following),
        key=lambda t: t.label,
    )
    deprecated = [t for t in my_terms if t.status is TermStatus.DEPRECATED]

    def down_voted(t: Term) -> bool:
        up, down = tally([v.direction for v in store.votes_for(t.id)])
        return down > up

    def brief(t: Term) -> dict:
        return {"id": t.id, "ark": t.ark, "label": t.label, "status": t.status.value}

    return {
        "id": user.id,
        "handle": user.handle,
        "display_name": user.display_name,
        "location": user.location,
        "external_links": [{"service": s, "url": u} for s, u in user.external_links],
        "profile_complete": user.profile_complete,
        "member_since": user.member_since.isoformat(),
        "last_seen": user.last_seen.isoformat(),
        "reputation": user.reputation,
        "followers": sorted(store.users[u].handle for u in user.followers if u in store.users),
        "following": sorted(store.users[u].handle for u in user.following if u in store.users),
        "my_terms": [brief(t) for t in my_terms],
        "tracked_terms": [brief(store.terms[t]) for t in sorted(user.tracked_terms) if t in store.terms],
        "terms_by_followed": [brief(t) for t in followed_terms],
        "deprecated_terms": [brief(t) for t in deprecated],
        "down_voted_terms": [brief(t) for t in my_terms if down_voted(t)],
    }
