"""Surveys: follower-audience or shareable-link polls over a set of terms,
with per-term 1-5 ratings and creator-only aggregated results.
"""

from __future__ import annotations

import secrets
from typing import Optional

from . import notify
from .errors import NotFound, PermissionDenied, ValidationFailed
from .models import NotificationKind, Survey, SurveyAudience, SurveyResponse
from .store import Store


def create_survey(
    store: Store,
    creator: str,
    term_ids: list[str],
    questions: Optional[list[str]] = None,
    audience: SurveyAudience | str = SurveyAudience.FOLLOWERS,
) -> Survey:
    """Follower surveys invite the creator's followers (snapshotted now);
    link surveys get an opaque response token instead."""
    audience = SurveyAudience(audience)
    user = store.user(creator)
    if not term_ids:
        raise ValidationFailed("a survey needs at least one term")
    terms = [store.term(tid) for tid in term_ids]
    if audience is SurveyAudience.FOLLOWERS:
        for term in terms:
            if term.custodian != user.id and term.contributor != user.id:
                raise PermissionDenied(
                    f"{user.handle} neither contributed nor curates term {term.label!r}"
                )
    survey = Survey(
        id=store.new_id("svy"),
        creator=user.id,
        term_ids=list(term_ids),
        questions=list(questions or [f"How appropriate is '{t.label}' for its stated purpose?" for t in terms]),
        audience=audience,
        created_at=store.clock(),
    )
    if audience is SurveyAudience.FOLLOWERS:
        survey.invited = set(user.followers)
        for uid in sorted(survey.invited):
            notify.emit(store, uid, NotificationKind.SURVEY_INVITE, survey.id)
    else:
        survey.token = secrets.token_urlsafe(16)
    store.surveys[survey.id] = survey
    return survey


def respond(
    store: Store,
    survey_id: str,
    term_id: str,
    rating: int,
    comment: str = "",
    responder: Optional[str] = None,
    token: Optional[str] = None,
) -> SurveyResponse:
    """Record one rating. Link surveys accept only token-bearers; follower
    surveys only invitees. One response per responder per term (replace)."""
    survey = store.surveys.get(survey_id)
    if survey is None:
        raise NotFound(f"unknown survey {survey_id!r}")
    if survey.closed:
        raise ValidationFailed("survey is closed")
    if term_id not in survey.term_ids:
        raise ValidationFailed("term is not part of this survey")
    if not 1 <= int(rating) <= 5:
        raise ValidationFailed("rating must be between 1 and 5")
    if survey.audience is SurveyAudience.LINK_TOKEN:
        if token != survey.token:
            raise PermissionDenied("link surveys require the survey token")
        who = responder or f"token:{token[:8]}"
    else:
        if responder is None:
            raise PermissionDenied("follower surveys require an authenticated responder")
        store.user(responder)
        if responder not in survey.invited:
            raise PermissionDenied("only invited followers may respond")
        who = responder
    response = SurveyResponse(responder=who, term=term_id, rating=int(rating), comment=comment)
    survey.responses = [
        r for r in survey.responses if not (r.responder == who and r.term == term_id)
    ]
    survey.responses.append(response)
    return response


def close_survey(store: Store, survey_id: str, caller: str) -> None:
    survey = store.surveys.get(survey_id)
    if survey is None:
        raise NotFound(f"unknown survey {survey_id!r}")
    if survey.creator != caller:
        raise PermissionDenied("only the creator may close a survey")
    survey.closed = True


def results(store: Store, survey_id: str, caller: str) -> dict:
    """Per-term mean rating and comments; visible to the creator only."""
    survey = store.surveys.get(survey_id)
    if survey is None:
        raise NotFound(f"unknown survey {survey_id!r}")
    if survey.creator != caller:
        raise PermissionDenied("survey results are visible to the creator only")
    per_term: dict[str, dict] = {}
    for tid in survey.term_ids:
        rows = [r for r in survey.responses if r.term == tid]
        per_term[tid] = {
            "responses": len(rows),
            "mean_rating": (sum(r.rating for r in rows) / len(rows)) if rows else None,
            "comments": [r.comment for r in rows if r.comment],
        }
    return {"survey": survey.id, "closed": survey.closed, "terms": per_term}
