"""Shared fixture builders for ingest/export/rescore tests."""

from __future__ import annotations

import json

from vocabregistry import ingest


def sourced_term(store, contributor_id, label, url, body=b"original"):
    """One imported term whose source pretends its original body was `body`."""
    doc = json.dumps({"terms": [{"label": label, "definition": f"The {label}."}]})
    result = ingest.import_schema(store, doc, "jsonterms", contributor_id, url=url)
    source = result.source
    source.content_hash = ingest._hash_document(body, "sha256")
    return result.created_terms[0], source

# 10 records x 5 fields; duplicate values chosen so the object-term count
# after dedupe is exactly 20 while the triple count stays 50
CREATORS = ["Harbor Observatory", "Polar Survey Group", "Delta Field Station"]
SUBJECTS = ["flooding", "glaciology", "climate", "ecology"]
LANGUAGES = ["en", "fr"]


def build_records_json(count: int = 10) -> str:
    rows = []
    for i in range(count):
        rows.append({
            "id": f"rec-{i + 1}",
            "Title": f"Survey Series {i + 1}",
            "Creator": CREATORS[i % len(CREATORS)],
            "Subject": SUBJECTS[i % len(SUBJECTS)],
            "Language": LANGUAGES[i % len(LANGUAGES)],
            "Format": "text/csv",
        })
    return json.dumps(rows)


def expected_object_terms(count: int = 10) -> int:
    titles = count
    creators = min(count, len(CREATORS))
    subjects = min(count, len(SUBJECTS))
    languages = min(count, len(LANGUAGES))
    formats = 1
    return titles + creators + subjects + languages + formats
