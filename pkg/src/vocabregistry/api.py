"""HTTP surface: authentication, term browsing and mutation, tracking and
notifications, surveys, tag services, grouped export, import, and the local
ARK resolver with inflections.

Every mutating endpoint requires a bearer token (link-survey responses may
carry the survey token instead). Errors always return the machine-readable
code + human message body.
"""

from __future__ import annotations

import threading
import time
from typing import Optional

from fastapi import Depends, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import ark as ark_registry
from . import auth, core, ingest, notify, queries, rescore, surveys, tags
from .config import ServiceConfig
from .errors import AuthenticationFailed, NotFound, RegistryError, ValidationFailed
from .exporters import ExportRequest, export
from .models import SurveyAudience, User
from .store import Store


class AuthBody(BaseModel):
    handle: str
    secret: str


class RegisterBody(BaseModel):
    handle: str
    secret: str
    display_name: str = ""
    location: str = ""
    external_links: list[tuple[str, str]] = Field(default_factory=list)


class ProposeBody(BaseModel):
    label: str
    definition: str
    examples: list[tuple[str, str]] = Field(default_factory=list)


class ReviseBody(BaseModel):
    label: Optional[str] = None
    definition: Optional[str] = None
    change_note: str = ""


class VoteBody(BaseModel):
    direction: str


class CommentBody(BaseModel):
    body: str
    is_review_request: bool = False


class ImportBody(BaseModel):
    document: str
    format: str
    kind: str = "schema"  # "schema" | "records"
    url: Optional[str] = None
    schema_id: Optional[str] = None
    collection_id: Optional[str] = None


class SurveyBody(BaseModel):
    term_ids: list[str]
    questions: Optional[list[str]] = None
    audience: str = "followers"


class SurveyResponseBody(BaseModel):
    term: str
    rating: int
    comment: str = ""
    token: Optional[str] = None


class ModeratorBody(BaseModel):
    moderator: str
    term_ids: Optional[list[str]] = None
    group_selector: Optional[str] = None


def create_app(store: Store, config: Optional[ServiceConfig] = None) -> FastAPI:
    cfg = config or ServiceConfig()
    th = cfg.thresholds
    ark_cfg = cfg.ark_config()
    app = FastAPI(title="vocabulary registry", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.config = cfg
    # the browser client is served from its own origin
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    def bearer(request: Request) -> User:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise AuthenticationFailed("missing bearer token")
        return auth.user_for_token(store, header[7:].strip())

    def term_id_for(ref: str) -> str:
        if ref in store.terms:
            return ref
        return ark_registry.resolve_term(store, ref).id

    @app.exception_handler(RegistryError)
    async def registry_error_handler(_req, exc: RegistryError):
        return JSONResponse(status_code=exc.http_status, content=exc.body())

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(_req, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "validation_failed", "message": str(exc.errors()[:1])}},
        )

    # -- sessions and users ---------------------------------------------------

    @app.post("/auth")
    def login(body: AuthBody):
        token = auth.authenticate(store, body.handle, body.secret, cfg.session_ttl_hours)
        user = store.user_by_handle(body.handle)
        return {"token": token, "user_id": user.id, "handle": user.handle}

    @app.post("/users", status_code=201)
    def register(body: RegisterBody):
        user = core.register_user(
            store, body.handle, secret=body.secret, display_name=body.display_name,
            location=body.location, external_links=body.external_links,
        )
        return queries.profile(store, user.id)

    @app.get("/users/{ref}")
    def profile(ref: str):
        return queries.profile(store, ref)

    @app.post("/users/{ref}/follow")
    def follow(ref: str, user: User = Depends(bearer)):
        followee = store.find_user(ref)
        core.follow_user(store, user.id, followee.id)
        return {"following": sorted(
            store.users[u].handle for u in store.user(user.id).following if u in store.users
        )}

    # -- terms ----------------------------------------------------------------

    @app.get("/terms")
    def browse(
        collection: Optional[str] = None,
        schema: Optional[str] = None,
        subject: Optional[str] = None,
        status: Optional[str] = None,
        tag: Optional[str] = None,
        contributor: Optional[str] = None,
        page: int = 1,
        page_size: int = 20,
    ):
        return queries.browse(
            store, page=page, page_size=page_size, collection=collection,
            schema=schema, subject=subject, status=status, tag=tag,
            contributor=contributor,
        )

    @app.post("/terms", status_code=201)
    def propose(body: ProposeBody, user: User = Depends(bearer)):
        term = core.propose_term(
            store, user.id, body.label, body.definition,
            examples=body.examples or None, thresholds=th, ark_config=ark_cfg,
        )
        rescore.drain(store, th)
        return queries.term_detail(store, term.id, th)

    @app.get("/terms/{ref:path}/lexemes")
    def lexemes_for(ref: str):
        return {"lexemes": tags.extract_lexemes(store, term_id_for(ref), cfg.stopwords_path)}

    @app.post("/terms/{ref:path}/vote")
    def vote(ref: str, body: VoteBody, user: User = Depends(bearer)):
        tid = term_id_for(ref)
        core.record_vote(store, user.id, tid, body.direction, th)
        rescore.drain(store, th)
        summary = queries.summarize(store, store.term(tid))
        return {"term": summary, "your_vote": body.direction}

    @app.post("/terms/{ref:path}/comments", status_code=201)
    def comment(ref: str, body: CommentBody, user: User = Depends(bearer)):
        tid = term_id_for(ref)
        c = core.add_comment(store, user.id, tid, body.body, body.is_review_request, th)
        rescore.drain(store, th)
        return {"id": c.id, "tags": c.tags, "posted_at": c.posted_at.isoformat()}

    @app.post("/terms/{ref:path}/track")
    def track(ref: str, user: User = Depends(bearer)):
        tid = term_id_for(ref)
        core.track_term(store, user.id, tid, th)
        return {"tracked_terms": sorted(store.user(user.id).tracked_terms)}

    @app.put("/terms/{ref:path}")
    def revise(ref: str, body: ReviseBody, user: User = Depends(bearer)):
        tid = term_id_for(ref)
        version = core.revise_term(
            store, user.id, tid, new_label=body.label,
            new_definition=body.definition, change_note=body.change_note, thresholds=th,
        )
        rescore.drain(store, th)
        return {
            "version": version.version,
            "replaces": version.replaces,
            "term": queries.summarize(store, store.term(tid)),
        }

    @app.get("/terms/{ref:path}")
    def detail(ref: str):
        return queries.term_detail(store, ref, th)

    # -- moderation -------------------------------------------------------------

    @app.post("/moderators", status_code=201)
    def assign(body: ModeratorBody, user: User = Depends(bearer)):
        moderator = store.find_user(body.moderator)
        group = body.group_selector if body.group_selector else [
            term_id_for(ref) for ref in (body.term_ids or [])
        ]
        assignment = core.assign_moderator(store, user.id, moderator.id, group)
        return {
            "id": assignment.id,
            "moderator": moderator.handle,
            "term_ids": sorted(assignment.term_group),
        }

    # -- import / export ---------------------------------------------------------

    @app.post("/import", status_code=201)
    def import_document(body: ImportBody, user: User = Depends(bearer)):
        if body.kind == "schema":
            result = ingest.import_schema(
                store, body.document, body.format, user.id, url=body.url,
                thresholds=th, ark_config=ark_cfg,
            )
            summary = {
                "kind": "schema",
                "schema_id": result.source.id,
                "schema_ark": result.schema_ark,
                "created": len(result.created_terms),
                "reused": len(result.reused_terms),
                "triples": len(result.created_triples),
                "terms": [queries.summarize(store, t) for t in result.created_terms],
            }
        elif body.kind == "records":
            if not body.schema_id:
                raise ValidationFailed("records imports need schema_id")
            result = ingest.import_records(
                store, body.document, body.format, body.schema_id, user.id,
                collection_id=body.collection_id, url=body.url,
                thresholds=th, ark_config=ark_cfg,
            )
            summary = {
                "kind": "records",
                "created": len(result.created_terms),
                "reused": len(result.reused_terms),
                "triples": len(result.created_triples),
                "warnings": result.warnings,
                "collection_ark": result.collection_ark,
            }
        else:
            raise ValidationFailed(f"unknown import kind {body.kind!r}")
        rescore.drain(store, th)
        return summary

    _MEDIA_TYPES = {
        "json": "application/json",
        "xml": "application/xml",
        "rdf": "application/rdf+xml",
        "skos": "application/rdf+xml",
    }

    @app.get("/export")
    def export_terms(
        format: str = "json",
        collection: Optional[str] = None,
        schema: Optional[str] = None,
        contributor: Optional[str] = None,
        tag: Optional[str] = None,
        status: Optional[str] = None,
        include_versions: bool = False,
    ):
        request = ExportRequest(
            format=format, collection=collection, schema=schema,
            contributor=contributor, tag=tag, status=status,
            include_versions=include_versions,
        )
        body = export(store, request, base_url=cfg.resolved_base_url())
        return Response(content=body, media_type=_MEDIA_TYPES[request.format])

    # -- surveys ------------------------------------------------------------------

    @app.post("/surveys", status_code=201)
    def create_survey(body: SurveyBody, user: User = Depends(bearer)):
        term_ids = [term_id_for(ref) for ref in body.term_ids]
        survey = surveys.create_survey(
            store, user.id, term_ids, questions=body.questions, audience=body.audience,
        )
        out = {
            "id": survey.id,
            "audience": survey.audience.value,
            "term_ids": survey.term_ids,
            "questions": survey.questions,
            "invited": sorted(survey.invited),
        }
        if survey.audience is SurveyAudience.LINK_TOKEN:
            out["token"] = survey.token
        return out

    @app.post("/surveys/{survey_id}/responses", status_code=201)
    def respond_survey(survey_id: str, body: SurveyResponseBody, request: Request):
        responder = None
        header = request.headers.get("authorization", "")
        if header.lower().startswith("bearer "):
            responder = auth.user_for_token(store, header[7:].strip()).id
        survey = store.surveys.get(survey_id)
        if survey is None:
            raise NotFound(f"unknown survey {survey_id!r}")
        if survey.audience is SurveyAudience.FOLLOWERS and responder is None:
            raise AuthenticationFailed("follower surveys require a bearer token")
        response = surveys.respond(
            store, survey_id, term_id_for(body.term), body.rating,
            comment=body.comment, responder=responder, token=body.token,
        )
        return {"term": response.term, "rating": response.rating}

    @app.get("/surveys/{survey_id}/results")
    def survey_results(survey_id: str, user: User = Depends(bearer)):
        return surveys.results(store, survey_id, user.id)

    @app.post("/surveys/{survey_id}/close")
    def close_survey(survey_id: str, user: User = Depends(bearer)):
        surveys.close_survey(store, survey_id, user.id)
        return {"id": survey_id, "closed": True}

    # -- notifications ---------------------------------------------------------------

    @app.get("/notifications")
    def notifications(user: User = Depends(bearer)):
        return {
            "notifications": [
                {
                    "id": n.id,
                    "kind": n.kind.value,
                    "subject_id": n.subject_id,
                    "created_at": n.created_at.isoformat(),
                    "delivered": n.delivered,
                    "channel": n.channel.value,
                }
                for n in notify.feed(store, user.id)
            ]
        }

    @app.post("/notifications/digest")
    def digest(user: User = Depends(bearer)):
        return {"digest": notify.generate_digest(store, user.id)}

    # -- tags --------------------------------------------------------------------------

    @app.get("/tags/suggest")
    def suggest_tags(prefix: str = ""):
        return {
            "suggestions": [
                {"tag": tag_name, "uses": uses} for tag_name, uses in tags.suggest(store, prefix)
            ]
        }

    # -- ARK resolver -------------------------------------------------------------------

    @app.get("/ark:/{naan}/{rest}")
    def resolve_ark(naan: str, rest: str, request: Request):
        ark_string = f"ark:/{naan}/{rest}"
        raw_query = request.scope.get("query_string", b"").decode()
        if raw_query == "?" :
            inflection = "??"
        elif raw_query in ("info", "info="):
            inflection = "?"
        else:
            inflection = ""
        return _serve_ark(store, ark_string, inflection, request.headers.get("accept", ""))

    return app


def _serve_ark(store: Store, ark_string: str, inflection: str, accept: str = ""):
    """Shared ARK request handling for the HTTP route and the raw-target
    parser (which sees literal "?" / "??" suffixes)."""
    record = ark_registry.resolve(store, ark_string)
    if inflection == "":
        body = {"ark": record.ark, "target_kind": record.target_kind,
                "minted_at": record.minted_at.isoformat()}
        if record.target_kind == "term":
            body["term"] = queries.summarize(store, store.term(record.target_id))
        else:
            body["target_id"] = record.target_id
        return body
    statement = ark_registry.target_statement(store, ark_string)
    if inflection == "?":
        if "text/plain" in accept:
            return Response(content=statement["statement"] + "\n", media_type="text/plain")
        return statement
    body = dict(statement)
    if record.target_kind == "term":
        term = store.term(record.target_id)
        body["version_metadata"] = ark_registry.version_metadata(store, term)
    if "text/plain" in accept:
        lines = [statement["statement"]]
        for key, value in body.get("version_metadata", {}).items():
            lines.append(f"{key}: {value}")
        return Response(content="\n".join(lines) + "\n", media_type="text/plain")
    return body


def handle_raw_target(store: Store, target: str):
    """Resolve a raw request target like "/ark:/99999/y21?" or ".../y21??",
    honoring literal single- and double-question-mark inflections."""
    ark_part, inflection = ark_registry.inflection_of(target)
    ark_string = ark_part.lstrip("/")
    return _serve_ark(store, ark_string, inflection)


def serve(store: Store, config: ServiceConfig, save_on_exit: bool = True) -> None:
    """Run the service under uvicorn, with the rescore consumer as a
    background thread, saving the store snapshot on shutdown."""
    import uvicorn

    app = create_app(store, config)
    stop = threading.Event()

    digest_interval = config.digest_cadence_days * 86400.0
    last_digest = time.monotonic()

    def consumer():
        nonlocal last_digest
        while not stop.wait(1.0):
            try:
                rescore.drain(store, config.thresholds)
            except RuntimeError:
                pass  # another drain in flight
            if time.monotonic() - last_digest >= digest_interval:
                notify.scheduled_digests(store)
                last_digest = time.monotonic()

    worker = threading.Thread(target=consumer, daemon=True, name="rescore-consumer")
    worker.start()
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    finally:
        stop.set()
        if save_on_exit:
            store.save(config.store_path)
