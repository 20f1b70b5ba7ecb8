"""Notification fan-out, digests, the durable outbox, and surveys."""

from __future__ import annotations

import pytest

from vocabregistry import core, notify, surveys
from vocabregistry.errors import NotFound, PermissionDenied, ValidationFailed
from vocabregistry.models import Channel, NotificationKind, SurveyAudience


class TestNotifications:
    def test_emit_respects_channel_preference(self, store, users):
        users["bob"].notify_channel = Channel.IMMEDIATE_OUTBOX
        note = notify.emit(store, users["bob"].id, NotificationKind.TERM_EDIT, "t1")
        assert note.delivered
        assert "term_edit" in store.outbox_path.read_text()

    def test_digest_bundles_and_marks_delivered(self, store, users, clock):
        for i in range(3):
            notify.emit(store, users["bob"].id, NotificationKind.TERM_EDIT, f"t{i}")
        doc = notify.generate_digest(store, users["bob"].id)
        assert doc.count("\n") == 2  # three lines
        assert all(n.delivered for n in store.notifications.values()
                   if n.recipient == users["bob"].id)

    def test_second_digest_is_empty(self, store, users):
        notify.emit(store, users["bob"].id, NotificationKind.TERM_EDIT, "t1")
        notify.generate_digest(store, users["bob"].id)
        assert notify.generate_digest(store, users["bob"].id) == ""

    def test_outbox_line_format(self, store, users):
        notify.emit(store, users["bob"].id, NotificationKind.TERM_EDIT, "t9")
        notify.generate_digest(store, users["bob"].id)
        line = store.outbox_path.read_text().strip().splitlines()[-1]
        timestamp, recipient, kind, subject = line.split("\t")
        assert recipient == "bob" and kind == "term_edit" and subject == "t9"
        assert timestamp.startswith("2025-")

    def test_feed_orders_undelivered_first(self, store, users, clock):
        first = notify.emit(store, users["bob"].id, NotificationKind.TERM_EDIT, "t1")
        clock.advance(seconds=5)
        second = notify.emit(store, users["bob"].id, NotificationKind.STATUS_CHANGE, "t2")
        first.delivered = True
        feed = notify.feed(store, users["bob"].id)
        assert [n.id for n in feed] == [second.id, first.id]

    def test_delivery_is_monotone(self, store, users):
        note = notify.emit(store, users["bob"].id, NotificationKind.TERM_EDIT, "t1")
        notify.generate_digest(store, users["bob"].id)
        assert note.delivered
        notify.generate_digest(store, users["bob"].id)
        assert note.delivered

    def test_scheduled_digests_cover_digest_channel_users_only(self, store, users):
        users["carol"].notify_channel = Channel.IN_APP
        notify.emit(store, users["bob"].id, NotificationKind.TERM_EDIT, "t1")
        in_app_note = notify.emit(store, users["carol"].id, NotificationKind.TERM_EDIT, "t1")
        assert notify.scheduled_digests(store) == 1
        assert not in_app_note.delivered  # in-app stays in the feed


@pytest.fixture
def followed(store, users):
    core.follow_user(store, users["bob"].id, users["alice"].id)
    core.follow_user(store, users["carol"].id, users["alice"].id)
    return users


@pytest.fixture
def survey_term(store, users):
    return core.propose_term(store, users["alice"].id, "Coverage", "Spatial or temporal scope.")


class TestSurveys:
    def test_invites_go_to_followers(self, store, followed, survey_term):
        before = len(store.notifications)
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id])
        invites = [n for n in list(store.notifications.values())[before:]
                   if n.kind is NotificationKind.SURVEY_INVITE]
        assert {n.recipient for n in invites} == {followed["bob"].id, followed["carol"].id}
        assert survey.invited == {followed["bob"].id, followed["carol"].id}

    def test_mean_rating(self, store, followed, survey_term):
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id])
        surveys.respond(store, survey.id, survey_term.id, 4, responder=followed["bob"].id)
        surveys.respond(store, survey.id, survey_term.id, 5, responder=followed["carol"].id)
        results = surveys.results(store, survey.id, followed["alice"].id)
        assert results["terms"][survey_term.id]["mean_rating"] == 4.5

    def test_duplicate_response_replaces(self, store, followed, survey_term):
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id])
        surveys.respond(store, survey.id, survey_term.id, 2, responder=followed["bob"].id)
        surveys.respond(store, survey.id, survey_term.id, 5, responder=followed["bob"].id)
        results = surveys.results(store, survey.id, followed["alice"].id)
        term_stats = results["terms"][survey_term.id]
        assert term_stats["responses"] == 1 and term_stats["mean_rating"] == 5.0

    def test_link_survey_requires_token(self, store, followed, survey_term):
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id],
                                       audience=SurveyAudience.LINK_TOKEN)
        assert survey.token
        with pytest.raises(PermissionDenied):
            surveys.respond(store, survey.id, survey_term.id, 3)
        surveys.respond(store, survey.id, survey_term.id, 3, token=survey.token)

    def test_follower_survey_rejects_outsiders(self, store, followed, survey_term, users):
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id])
        with pytest.raises(PermissionDenied):
            surveys.respond(store, survey.id, survey_term.id, 3, responder=users["dave"].id)

    def test_snapshot_audience_at_invite_time(self, store, followed, survey_term, users):
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id])
        core.follow_user(store, users["dave"].id, followed["alice"].id)  # too late
        with pytest.raises(PermissionDenied):
            surveys.respond(store, survey.id, survey_term.id, 3, responder=users["dave"].id)

    def test_closed_survey_rejects_responses(self, store, followed, survey_term):
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id])
        surveys.close_survey(store, survey.id, followed["alice"].id)
        with pytest.raises(ValidationFailed):
            surveys.respond(store, survey.id, survey_term.id, 4, responder=followed["bob"].id)

    def test_results_creator_only(self, store, followed, survey_term):
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id])
        with pytest.raises(PermissionDenied):
            surveys.results(store, survey.id, followed["bob"].id)

    def test_survey_needs_owned_terms(self, store, followed, users):
        other = core.propose_term(store, users["dave"].id, "X", "x def")
        with pytest.raises(PermissionDenied):
            surveys.create_survey(store, followed["alice"].id, [other.id])

    def test_rating_bounds(self, store, followed, survey_term):
        survey = surveys.create_survey(store, followed["alice"].id, [survey_term.id])
        with pytest.raises(ValidationFailed):
            surveys.respond(store, survey.id, survey_term.id, 6, responder=followed["bob"].id)

    def test_unknown_survey(self, store, users):
        with pytest.raises(NotFound):
            surveys.respond(store, "svy99", "t1", 3)
