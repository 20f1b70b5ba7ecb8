"""HTTP surface: auth, endpoint authorization sweep, browsing/pagination,
term mutations, import/export, surveys, notifications, tags, and the ARK
resolver with inflections."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from vocabregistry import core, demo
from vocabregistry.api import create_app, handle_raw_target
from vocabregistry.config import ServiceConfig
from vocabregistry.store import Store
from tests.conftest import FakeClock


@pytest.fixture
def clockapp(tmp_path):
    clock = FakeClock()
    store = Store(clock=clock, outbox_path=tmp_path / "outbox.log")
    cfg = ServiceConfig()
    demo.seed_demo(store, cfg, user_count=4)
    app = create_app(store, cfg)
    return clock, store, TestClient(app)


@pytest.fixture
def client(clockapp):
    return clockapp[2]


@pytest.fixture
def store(clockapp):
    return clockapp[1]


def login(client, handle="chris") -> dict:
    r = client.post("/auth", json={"handle": handle, "secret": f"{handle}-secret"})
    assert r.status_code == 200, r.text
    token = r.json()["token"]
    return {"Authorization": f"Bearer {token}"}


def first_term_ark(client, **params) -> str:
    r = client.get("/terms", params=params)
    return r.json()["items"][0]["ark"]


class TestAuth:
    def test_login_and_use_token(self, client):
        headers = login(client, "bob")
        ark = first_term_ark(client)
        r = client.post(f"/terms/{ark}/track", headers=headers)
        assert r.status_code == 200

    def test_bad_credential(self, client):
        r = client.post("/auth", json={"handle": "bob", "secret": "wrong"})
        assert r.status_code == 401
        assert r.json()["error"]["code"] == "authentication_failed"

    def test_garbage_token_rejected(self, client):
        r = client.post("/terms", json={"label": "X", "definition": "d"},
                        headers={"Authorization": "Bearer garbage"})
        assert r.status_code == 401

    def test_expired_token_distinct_code(self, clockapp):
        clock, store, client = clockapp
        headers = login(client, "bob")
        clock.advance(days=2)
        r = client.post("/terms", json={"label": "X", "definition": "d"}, headers=headers)
        assert r.status_code == 401
        assert r.json()["error"]["code"] == "token_expired"

    def test_registration(self, client):
        r = client.post("/users", json={"handle": "newbie", "secret": "pw"})
        assert r.status_code == 201
        assert client.post("/auth", json={"handle": "newbie", "secret": "pw"}).status_code == 200


MUTATING = [
    ("POST", "/terms", {"label": "X", "definition": "d"}),
    ("PUT", "/terms/{ark}", {"definition": "d2"}),
    ("POST", "/terms/{ark}/vote", {"direction": "up"}),
    ("POST", "/terms/{ark}/comments", {"body": "hi"}),
    ("POST", "/terms/{ark}/track", None),
    ("POST", "/users/bob/follow", None),
    ("POST", "/import", {"document": "[]", "format": "jsonterms"}),
    ("POST", "/surveys", {"term_ids": []}),
    ("POST", "/surveys/svy1/responses", {"term": "t1", "rating": 3}),
    ("POST", "/surveys/svy1/results", None),
    ("POST", "/notifications/digest", None),
    ("POST", "/moderators", {"moderator": "bob", "term_ids": []}),
]


class TestAuthorizationCompleteness:
    @pytest.mark.parametrize("method,path,body", MUTATING,
                             ids=[f"{m} {p}" for m, p, _ in MUTATING])
    def test_every_mutating_endpoint_rejects_anonymous(self, client, method, path, body):
        path = path.replace("{ark}", first_term_ark(client))
        r = client.request(method, path, json=body)
        assert r.status_code in (401, 405), f"{method} {path} -> {r.status_code}"
        if r.status_code == 401:
            assert r.json()["error"]["code"] in ("authentication_failed", "token_expired")


class TestBrowse:
    def test_filter_flow_narrows(self, client):
        everything = client.get("/terms").json()["total"]
        in_collection = client.get(
            "/terms", params={"collection": "field-observations"}
        ).json()["total"]
        by_subject = client.get(
            "/terms", params={"collection": "field-observations", "subject": "Creator"}
        ).json()["total"]
        assert everything > in_collection > by_subject > 0

    def test_unknown_filter_value_is_empty_not_error(self, client):
        r = client.get("/terms", params={"status": "bogus"})
        assert r.status_code == 200 and r.json()["total"] == 0

    def test_pagination_soundness(self, client):
        full = client.get("/terms", params={"page_size": 1000}).json()
        collected = []
        page = 1
        while True:
            chunk = client.get("/terms", params={"page": page, "page_size": 7}).json()
            collected.extend(item["id"] for item in chunk["items"])
            if page >= chunk["pages"]:
                break
            page += 1
        assert collected == [item["id"] for item in full["items"]]
        assert len(set(collected)) == len(collected)

    def test_stable_ordering(self, client):
        items = client.get("/terms", params={"page_size": 1000}).json()["items"]
        keys = [(-i["consensus_score"], i["label"]) for i in items]
        assert keys == sorted(keys)


class TestTermLifecycle:
    def test_propose_and_read_back(self, client):
        headers = login(client, "bob")
        r = client.post("/terms", json={
            "label": "Provenance", "definition": "Chain of custody for a resource.",
        }, headers=headers)
        assert r.status_code == 201
        body = r.json()
        assert body["status"] == "vernacular"
        assert body["consensus_score"] == 0.5
        assert body["stability_score"] == 0.0
        assert body["applicability_score"] == 1.0
        detail = client.get(f"/terms/{body['ark']}").json()
        assert detail["label"] == "Provenance"

    def test_duplicate_label_conflict(self, client):
        headers = login(client, "bob")
        payload = {"label": "Dup", "definition": "d"}
        assert client.post("/terms", json=payload, headers=headers).status_code == 201
        r = client.post("/terms", json=payload, headers=headers)
        assert r.status_code == 409
        assert r.json()["error"]["code"] == "conflict"

    def test_revise_bumps_version(self, client):
        headers = login(client, "chris")
        ark = first_term_ark(client, contributor="chris")
        r = client.put(f"/terms/{ark}", json={"definition": "Sharper wording.",
                                              "change_note": "tighten"}, headers=headers)
        assert r.status_code == 200
        detail = client.get(f"/terms/{ark}").json()
        assert detail["current_version"] == r.json()["version"]
        assert len(detail["versions"]) == detail["current_version"]

    def test_vote_updates_tally(self, client):
        headers = login(client, "bob")
        ark = first_term_ark(client, contributor="chris")
        before = client.get(f"/terms/{ark}").json()
        r = client.post(f"/terms/{ark}/vote", json={"direction": "up"}, headers=headers)
        assert r.status_code == 200
        after = client.get(f"/terms/{ark}").json()
        assert after["up_votes"] + after["down_votes"] >= before["up_votes"] + before["down_votes"]
        assert r.json()["term"]["up_votes"] == after["up_votes"]

    def test_vote_idempotent_under_retry(self, client):
        headers = login(client, "bob")
        ark = first_term_ark(client, contributor="chris")
        first = client.post(f"/terms/{ark}/vote", json={"direction": "up"}, headers=headers).json()
        second = client.post(f"/terms/{ark}/vote", json={"direction": "up"}, headers=headers).json()
        assert first["term"]["up_votes"] == second["term"]["up_votes"]

    def test_self_vote_rejected(self, client):
        headers = login(client, "chris")
        ark = first_term_ark(client, contributor="chris")
        r = client.post(f"/terms/{ark}/vote", json={"direction": "up"}, headers=headers)
        assert r.status_code == 403

    def test_comment_with_tags(self, client):
        headers = login(client, "bob")
        ark = first_term_ark(client, contributor="chris")
        r = client.post(f"/terms/{ark}/comments",
                        json={"body": "great for #Geospatial data"}, headers=headers)
        assert r.status_code == 201
        assert r.json()["tags"] == ["geospatial"]

    def test_follow_idempotent(self, client):
        headers = login(client, "dana")
        first = client.post("/users/chris/follow", headers=headers).json()
        second = client.post("/users/chris/follow", headers=headers).json()
        assert first == second

    def test_unknown_term_404(self, client):
        r = client.get("/terms/ark:/99999/y2zzzz")
        assert r.status_code == 404
        assert r.json()["error"]["code"] == "not_found"

    def test_detail_shows_source_and_audit(self, client):
        ark = first_term_ark(client, collection="field-observations")
        detail = client.get(f"/terms/{ark}").json()
        assert detail["source"] is not None
        assert detail["source"]["collection"] == "field-observations"
        assert "last_audit" in detail["source"]


class TestProfile:
    def test_sections_present(self, client):
        profile = client.get("/users/chris").json()
        assert profile["handle"] == "chris"
        assert "bob" in profile["followers"]
        assert len(profile["my_terms"]) >= 18
        labels = {t["label"] for t in profile["my_terms"]}
        assert {"Identifier", "Title", "Creator"} <= labels
        assert "member_since" in profile and "last_seen" in profile

    def test_tracked_terms_listed(self, client):
        profile = client.get("/users/bob").json()
        assert {t["label"] for t in profile["tracked_terms"]} == {"Definition", "Name"}

    def test_terms_by_followed(self, client):
        profile = client.get("/users/bob").json()
        assert len(profile["terms_by_followed"]) >= 18  # bob follows chris

    def test_unknown_user(self, client):
        assert client.get("/users/nobody").status_code == 404


class TestImportExport:
    def test_import_endpoint(self, client):
        headers = login(client, "dana")
        doc = json.dumps({"terms": [{"label": "Altitude", "definition": "Height above datum."}]})
        r = client.post("/import", json={"document": doc, "format": "jsonterms"},
                        headers=headers)
        assert r.status_code == 201
        assert r.json()["created"] == 1

    def test_import_records_endpoint(self, client, store):
        headers = login(client, "dana")
        schema_id = next(s for s in store.sources.values() if s.collection_id is None).id
        doc = json.dumps([{"id": "r1", "Title": "New Atlas"}])
        r = client.post("/import", json={
            "document": doc, "format": "jsonterms", "kind": "records",
            "schema_id": schema_id, "collection_id": "atlases",
        }, headers=headers)
        assert r.status_code == 201
        assert r.json()["created"] == 1

    def test_malformed_import_yields_error_body(self, client):
        headers = login(client, "dana")
        r = client.post("/import", json={"document": "<broken", "format": "rdfxml"},
                        headers=headers)
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "parse_failure"
        assert "line" in r.json()["error"]["message"]

    def test_export_formats_and_media_types(self, client):
        for fmt, content_type in [("json", "application/json"), ("xml", "application/xml"),
                                  ("rdf", "application/rdf+xml"), ("skos", "application/rdf+xml")]:
            r = client.get("/export", params={"format": fmt})
            assert r.status_code == 200
            assert r.headers["content-type"].startswith(content_type)

    def test_export_bad_format(self, client):
        r = client.get("/export", params={"format": "pdf"})
        assert r.status_code == 422

    def test_export_include_versions_deprecated_flag(self, client, store):
        term = next(iter(store.terms.values()))
        core.apply_classification(store, term.id, 0.05, 1.0)
        r = client.get("/export", params={"format": "rdf", "include_versions": "true"})
        assert 'deprecated' in r.text and 'true' in r.text


class TestSurveyEndpoints:
    def test_follower_survey_flow(self, client, store):
        headers = login(client, "chris")
        ark = first_term_ark(client, contributor="chris")
        r = client.post("/surveys", json={"term_ids": [ark]}, headers=headers)
        assert r.status_code == 201
        survey = r.json()
        assert survey["invited"]

        bob_headers = login(client, "bob")
        rr = client.post(f"/surveys/{survey['id']}/responses",
                         json={"term": ark, "rating": 4}, headers=bob_headers)
        assert rr.status_code == 201
        results = client.get(f"/surveys/{survey['id']}/results", headers=headers).json()
        term_id = survey["term_ids"][0]
        assert results["terms"][term_id]["mean_rating"] == 4.0

    def test_link_survey_token(self, client):
        headers = login(client, "chris")
        ark = first_term_ark(client, contributor="chris")
        survey = client.post("/surveys", json={"term_ids": [ark], "audience": "link_token"},
                             headers=headers).json()
        token = survey["token"]
        anon = client.post(f"/surveys/{survey['id']}/responses",
                           json={"term": ark, "rating": 5, "token": token})
        assert anon.status_code == 201
        tokenless = client.post(f"/surveys/{survey['id']}/responses",
                                json={"term": ark, "rating": 5})
        assert tokenless.status_code == 403

    def test_results_creator_only(self, client):
        headers = login(client, "chris")
        ark = first_term_ark(client, contributor="chris")
        survey = client.post("/surveys", json={"term_ids": [ark]}, headers=headers).json()
        other = login(client, "bob")
        assert client.get(f"/surveys/{survey['id']}/results", headers=other).status_code == 403


class TestNotificationEndpoints:
    def test_tracked_edit_appears_in_feed(self, client):
        chris_headers = login(client, "chris")
        ark = first_term_ark(client, contributor="chris")
        bob_headers = login(client, "bob")
        client.post(f"/terms/{ark}/track", headers=bob_headers)
        client.put(f"/terms/{ark}", json={"definition": "edited once more"},
                   headers=chris_headers)
        feed = client.get("/notifications", headers=bob_headers).json()["notifications"]
        assert any(n["kind"] == "term_edit" and n["subject_id"] for n in feed)

    def test_digest_empties(self, client):
        bob_headers = login(client, "bob")
        client.post("/notifications/digest", headers=bob_headers)
        second = client.post("/notifications/digest", headers=bob_headers).json()
        assert second["digest"] == ""


class TestTagEndpoints:
    def test_suggest_prefix(self, client):
        r = client.get("/tags/suggest", params={"prefix": "geo"})
        assert r.status_code == 200
        names = [s["tag"] for s in r.json()["suggestions"]]
        assert "geospatial" in names

    def test_lexemes(self, client):
        ark = first_term_ark(client, contributor="chris")
        r = client.get(f"/terms/{ark}/lexemes")
        assert r.status_code == 200
        assert r.json()["lexemes"]


class TestArkResolver:
    def test_plain_resolution(self, client):
        ark = first_term_ark(client)
        r = client.get(f"/{ark}")
        assert r.status_code == 200
        assert r.json()["term"]["ark"] == ark

    def test_hyphen_insensitive_over_http(self, client):
        ark = first_term_ark(client)
        hyphenated = ark.replace("ark:/99999/", "ark:/99999/") \
                        .replace(ark[-2:], f"{ark[-2]}-{ark[-1]}")
        r = client.get(f"/{hyphenated}")
        assert r.status_code == 200
        assert r.json()["term"]["ark"] == ark

    def test_double_inflection_over_http(self, client):
        ark = first_term_ark(client)
        r = client.get(f"/{ark}??")
        assert r.status_code == 200
        body = r.json()
        assert "statement" in body and "version_metadata" in body
        assert body["version_metadata"]["owl:versionInfo"].startswith("version")

    def test_info_alias_over_http(self, client):
        ark = first_term_ark(client)
        r = client.get(f"/{ark}?info")
        assert r.status_code == 200
        body = r.json()
        assert "statement" in body and "version_metadata" not in body

    def test_single_inflection_text_negotiation(self, client, store):
        ark = first_term_ark(client)
        r = client.get(f"/{ark}?info", headers={"Accept": "text/plain"})
        assert r.headers["content-type"].startswith("text/plain")
        assert "persistence commitment" in r.text

    def test_double_inflection_text_negotiation(self, client):
        ark = first_term_ark(client)
        r = client.get(f"/{ark}??", headers={"Accept": "text/plain"})
        assert r.headers["content-type"].startswith("text/plain")
        assert "owl:versionInfo" in r.text

    def test_raw_target_single_inflection(self, store):
        term = next(iter(store.terms.values()))
        body = handle_raw_target(store, f"/{term.ark}?")
        assert body["statement"].startswith(term.ark)
        assert "version_metadata" not in body

    def test_raw_target_double_inflection(self, store):
        term = next(iter(store.terms.values()))
        body = handle_raw_target(store, f"/{term.ark}??")
        assert "version_metadata" in body

    def test_unknown_ark_404(self, client):
        r = client.get("/ark:/99999/y2zzzz9")
        assert r.status_code == 404

    def test_schema_and_collection_arks_resolve(self, client, store):
        kinds = {rec.target_kind for rec in store.ark_records.values()}
        assert {"term", "schema", "collection"} <= kinds
        schema_ark = next(r.ark for r in store.ark_records.values()
                          if r.target_kind == "schema")
        r = client.get(f"/{schema_ark}")
        assert r.status_code == 200 and r.json()["target_kind"] == "schema"


class TestErrorBodies:
    def test_every_error_has_code_and_message(self, client):
        samples = [
            client.post("/auth", json={"handle": "x", "secret": "y"}),
            client.get("/terms/ark:/99999/y2qqqq"),
            client.get("/users/ghost"),
            client.get("/export", params={"format": "nope"}),
            client.post("/terms", json={"label": "X", "definition": "d"}),
        ]
        for response in samples:
            body = response.json()
            assert set(body["error"]) == {"code", "message"}, body
