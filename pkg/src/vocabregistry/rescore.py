"""Queue-driven rescoring: the single consumer that recomputes reputations,
rebuilds vote slates, applies stability/applicability updates, and reclassifies
terms. Replaying any event against unchanged data is a no-op.
"""

from __future__ import annotations

import logging
from typing import Callable, Optional

from . import core, ingest, notify, scoring
from .models import (
    AuditOutcome,
    AuditResult,
    EventKind,
    NotificationKind,
    RescoreEvent,
    Term,
    User,
)
from .scoring import Thresholds, Voter, VoteSlate, VoterRole
from .store import Store

logger = logging.getLogger(__name__)


def recompute_reputation(store: Store, user: User, thresholds: Thresholds) -> float:
    actions = scoring.recent_actions(user.action_log, store.clock(), thresholds)
    user.reputation = scoring.reputation(
        user.profile_complete, len(user.followers), actions, thresholds
    )
    return user.reputation


def build_slate(store: Store, term: Term, thresholds: Thresholds) -> VoteSlate:
    """Assemble the term's voters with cached reputations and their roles
    (moderator assignments trump custodian-followed status)."""
    custodian = store.users.get(term.custodian)
    moderator_ids = store.moderator_roles(term.id)
    voters = []
    for vote in store.votes_for(term.id):
        user = store.users.get(vote.user)
        if user is None:
            continue
        if user.id in moderator_ids:
            role = VoterRole.MODERATOR
        elif custodian is not None and user.id in custodian.following:
            role = VoterRole.FOLLOWED_BY_CUSTODIAN
        else:
            role = VoterRole.PLAIN
        voters.append(Voter(user=user.id, reputation=user.reputation,
                            direction=vote.direction, role=role))
    return VoteSlate(t=len(store.users), voters=voters)


def rescore_term(store: Store, term_id: str, thresholds: Thresholds) -> Optional[Term]:
    """Recompute one term's consensus, stability, and applicability from the
    stored base data, then reclassify. Absolute recomputation (no increments)
    is what makes replays idempotent."""
    term = store.terms.get(term_id)
    if term is None:
        logger.info("rescore: term %s no longer exists; event discarded", term_id)
        return None
    now = store.clock()
    old_consensus = term.consensus_score

    consensus = scoring.weighted_score(build_slate(store, term, thresholds), thresholds)

    if term.source is None:
        # manual terms earn stability by remaining unaltered
        days_unaltered = max(0.0, (now - term.modified).total_seconds() / 86400.0)
        stability = scoring.stability_update(0.0, "aged", days_unaltered, thresholds)
    else:
        stability = term.stability_score  # audits adjust sourced terms

    days_idle = max(0.0, (now - term.last_interaction).total_seconds() / 86400.0)
    applicability = scoring.applicability_decay(term.applicability_base, days_idle, thresholds)

    with store.term_lock(term_id):
        term.consensus_score = consensus
        term.stability_score = stability
        term.applicability_score = applicability
    core.apply_classification(store, term_id, consensus, stability, thresholds)
    _emit_threshold_crossings(store, term, old_consensus, consensus)
    return term


def _emit_threshold_crossings(store: Store, term: Term, old: float, new: float) -> None:
    if old == new:
        return
    for tracker in store.trackers_of(term.id):
        for band in tracker.threshold_bands:
            if (old < band <= new) or (new <= band < old):
                notify.emit(store, tracker.id, NotificationKind.THRESHOLD_CROSSING, term.id)
                break


def apply_audit(store: Store, result: AuditResult, thresholds: Thresholds) -> list[str]:
    """Feed one audit outcome into stability. Hash updates and the
    last-outcome marker make repeated application a no-op: a content change
    penalizes once, unreachability penalizes on the transition."""
    source = store.sources.get(result.source)
    if source is None:
        logger.info("audit: source %s no longer exists; result discarded", result.source)
        return []
    affected = [t for t in store.terms.values() if t.source == source.id]
    touched: list[str] = []
    if result.outcome is AuditOutcome.UNCHANGED:
        source.last_outcome = AuditOutcome.UNCHANGED
        source.fetched_at = result.checked_at
        return []
    if result.outcome is AuditOutcome.CHANGED:
        for term in affected:
            with store.term_lock(term.id):
                term.stability_score = scoring.stability_update(
                    term.stability_score, "changed", thresholds=thresholds
                )
                term.flagged = True
            touched.append(term.id)
        source.content_hash = result.new_hash or source.content_hash
        source.last_outcome = AuditOutcome.CHANGED
        source.fetched_at = result.checked_at
    else:  # unreachable
        if source.last_outcome is not AuditOutcome.UNREACHABLE:
            for term in affected:
                with store.term_lock(term.id):
                    term.stability_score = scoring.stability_update(
                        term.stability_score, "unreachable", thresholds=thresholds
                    )
                touched.append(term.id)
            source.last_outcome = AuditOutcome.UNREACHABLE
    for term_id in touched:
        term = store.terms[term_id]
        core.apply_classification(
            store, term_id, term.consensus_score, term.stability_score, thresholds
        )
    return touched


def sweep(
    store: Store,
    thresholds: Thresholds,
    fetcher: Optional[Callable[[str], bytes]] = None,
    audit: bool = True,
    audit_concurrency: int = 4,
) -> int:
    """The scheduled pass: refresh every reputation, audit every fetchable
    source, recompute and reclassify every term. Returns the term count."""
    for user in store.users.values():
        recompute_reputation(store, user, thresholds)
    if audit:
        for result in ingest.audit_sweep(store, fetcher, concurrency=audit_concurrency):
            apply_audit(store, result, thresholds)
    for term_id in list(store.terms):
        rescore_term(store, term_id, thresholds)
    return len(store.terms)


def rescore(
    store: Store,
    event: RescoreEvent,
    thresholds: Thresholds,
    fetcher: Optional[Callable[[str], bytes]] = None,
) -> None:
    """Process one dequeued event."""
    if event.kind in (EventKind.VOTE, EventKind.COMMENT, EventKind.EDIT, EventKind.IMPORT):
        if event.user is not None:
            user = store.users.get(event.user)
            if user is not None:
                recompute_reputation(store, user, thresholds)
        if event.term is not None:
            rescore_term(store, event.term, thresholds)
        return
    if event.kind is EventKind.REPUTATION_CHANGE:
        user = store.users.get(event.user or "")
        if user is None:
            logger.info("rescore: user %s no longer exists; event discarded", event.user)
            return
        recompute_reputation(store, user, thresholds)
        for (voter_id, term_id) in list(store.votes):
            if voter_id == user.id:
                rescore_term(store, term_id, thresholds)
        return
    if event.kind is EventKind.SWEEP:
        if event.term is not None:
            # audit-on-access: one term, its source only
            term = store.terms.get(event.term)
            if term is None:
                logger.info("rescore: term %s no longer exists; event discarded", event.term)
                return
            if term.source is not None:
                source = store.sources.get(term.source)
                if source is not None and not source.url.startswith("urn:"):
                    apply_audit(store, ingest.verify_source(store, source, fetcher), thresholds)
            rescore_term(store, event.term, thresholds)
        else:
            sweep(store, thresholds, fetcher)
        return
    raise ValueError(f"unhandled event kind {event.kind!r}")


def drain(
    store: Store,
    thresholds: Thresholds,
    fetcher: Optional[Callable[[str], bytes]] = None,
    limit: Optional[int] = None,
) -> int:
    """Consume pending events in FIFO order. Exactly one consumer may run at
    a time; concurrent producers are fine."""
    if not store._consumer_lock.acquire(blocking=False):
        raise RuntimeError("the rescore queue already has a consumer")
    try:
        processed = 0
        while limit is None or processed < limit:
            event = store.dequeue()
            if event is None:
                break
            rescore(store, event, thresholds, fetcher)
            processed += 1
        return processed
    finally:
        store._consumer_lock.release()


def run_sweep(
    store: Store,
    thresholds: Thresholds,
    fetcher: Optional[Callable[[str], bytes]] = None,
) -> int:
    """Enqueue a sweep event and drain the queue (the CLI entry point)."""
    store.enqueue(RescoreEvent(kind=EventKind.SWEEP))
    return drain(store, thresholds, fetcher)
