"""Demo data: a metadata-element schema, a small record collection, and a
handful of community members with votes, comments, follows, and a survey.

Used by `vocabregistry seed` and by integration tests that need a populated
backend. Every seeded user's secret is "<handle>-secret".
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from . import core, ingest, rescore, surveys
from .config import ServiceConfig
from .models import SurveyAudience, VoteDirection
from .store import Store

ELEMENT_LABELS = [
    "Contributor", "Coverage", "Creator", "Date", "Definition", "Description",
    "Format", "Identifier", "Label", "Language", "Name", "Publisher",
    "Relation", "Rights", "Source", "Subject", "Title", "URI",
]

ELEMENT_DEFINITIONS = {
    "Contributor": "An entity responsible for making contributions to the resource.",
    "Coverage": "The spatial or temporal topic of the resource.",
    "Creator": "An entity primarily responsible for making the resource.",
    "Date": "A point or period of time associated with an event in the lifecycle of the resource.",
    "Definition": "A statement that represents the concept and essential nature of the resource.",
    "Description": "An account of the resource.",
    "Format": "The file format, physical medium, or dimensions of the resource.",
    "Identifier": "An unambiguous reference to the resource within a given context.",
    "Label": "A human-readable name assigned to the resource for display.",
    "Language": "A language of the resource.",
    "Name": "A short natural-language designation for the resource.",
    "Publisher": "An entity responsible for making the resource available.",
    "Relation": "A related resource.",
    "Rights": "Information about rights held in and over the resource.",
    "Source": "A related resource from which the described resource is derived.",
    "Subject": "The topic of the resource.",
    "Title": "A name given to the resource.",
    "URI": "A uniform resource identifier that locates or identifies the resource.",
}

# refinement relations between elements (subPropertyOf)
ELEMENT_REFINEMENTS = [
    ("Name", "Title"),
    ("Label", "Title"),
    ("URI", "Identifier"),
    ("Source", "Relation"),
]

_SCHEMA_NS = "http://example.org/elements/"


def schema_document(labels=None, refinements=None) -> str:
    """The demo/fixture schema as RDF/XML: one rdf:Property per element with
    label + comment, plus subPropertyOf refinements."""
    labels = ELEMENT_LABELS if labels is None else labels
    refinements = ELEMENT_REFINEMENTS if refinements is None else refinements
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"',
        '         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"',
        '         xmlns:dcterms="http://purl.org/dc/terms/">',
    ]
    refinement_map = dict(refinements)
    for label in labels:
        iri = _SCHEMA_NS + label.lower()
        lines.append(f'  <rdf:Property rdf:about="{iri}">')
        lines.append(f"    <rdfs:label>{escape(label)}</rdfs:label>")
        definition = ELEMENT_DEFINITIONS.get(label, f"The {label.lower()} of the resource.")
        lines.append(f"    <rdfs:comment>{escape(definition)}</rdfs:comment>")
        if label in refinement_map:
            parent = _SCHEMA_NS + refinement_map[label].lower()
            lines.append(f'    <rdfs:subPropertyOf rdf:resource="{parent}"/>')
        lines.append("  </rdf:Property>")
    lines.append("</rdf:RDF>")
    return "\n".join(lines) + "\n"


def records_document() -> str:
    """Five records against the element schema, as generic XML."""
    rows = [
        ("rec-1", "Coastal Flood Extents", "Harbor Observatory", "flooding"),
        ("rec-2", "Glacier Mass Balance", "Polar Survey Group", "glaciology"),
        ("rec-3", "Urban Heat Islands", "Harbor Observatory", "climate"),
        ("rec-4", "Wetland Bird Counts", "Delta Field Station", "ecology"),
        ("rec-5", "Soil Moisture Grids", "Polar Survey Group", "hydrology"),
    ]
    lines = ["<records>"]
    for rec_id, title, creator, subject in rows:
        lines.append(f'  <record id="{rec_id}">')
        lines.append(f"    <Title>{escape(title)}</Title>")
        lines.append(f"    <Creator>{escape(creator)}</Creator>")
        lines.append(f"    <Subject>{escape(subject)}</Subject>")
        lines.append("  </record>")
    lines.append("</records>")
    return "\n".join(lines) + "\n"


def seed_demo(store: Store, cfg: ServiceConfig, user_count: int = 6) -> dict:
    th = cfg.thresholds
    ark_cfg = cfg.ark_config()

    handles = ["chris", "bob", "alice", "dana", "erin", "frank", "grace", "hana"][:max(2, user_count)]
    users = {}
    for i, handle in enumerate(handles):
        profile = {}
        if i % 2 == 0:
            profile = {
                "display_name": handle.title(),
                "location": "Philadelphia, PA",
                "external_links": [("orcid", f"https://orcid.org/0000-0000-0000-{i:04d}")],
            }
        users[handle] = core.register_user(store, handle, secret=f"{handle}-secret", **profile)

    chris = users["chris"]
    schema = ingest.import_schema(
        store, schema_document(), "rdfxml", chris.id,
        thresholds=th, ark_config=ark_cfg,
    )
    records = ingest.import_records(
        store, records_document(), "genericxml", schema.source.id, chris.id,
        collection_id="field-observations", thresholds=th, ark_config=ark_cfg,
    )

    label_to_term = {t.label: t for t in schema.created_terms}
    others = [u for h, u in users.items() if h != "chris"]
    votes = 0
    for i, label in enumerate(ELEMENT_LABELS):
        term = label_to_term[label]
        for j, user in enumerate(others):
            if (i + j) % 3 == 0:
                direction = VoteDirection.UP if (i + j) % 7 else VoteDirection.DOWN
                core.record_vote(store, user.id, term.id, direction, th)
                votes += 1

    bob = users["bob"]
    core.follow_user(store, bob.id, chris.id)
    core.follow_user(store, chris.id, bob.id)
    if "alice" in users:
        core.follow_user(store, users["alice"].id, chris.id)
    core.track_term(store, bob.id, label_to_term["Definition"].id, th)
    core.track_term(store, bob.id, label_to_term["Name"].id, th)

    core.add_comment(
        store, bob.id, label_to_term["Coverage"].id,
        "fits #geospatial datasets well, also #coverage", thresholds=th,
    )
    core.add_comment(
        store, bob.id, label_to_term["Subject"].id,
        "useful for #geospatial and #topical grouping", thresholds=th,
    )
    core.assign_moderator(store, chris.id, bob.id, schema.source.id)
    surveys.create_survey(
        store, chris.id,
        [label_to_term["Title"].id, label_to_term["Creator"].id],
        audience=SurveyAudience.FOLLOWERS,
    )
    rescore.drain(store, th)
    return {
        "users": len(users),
        "terms": len(store.terms),
        "votes": votes,
        "schema_id": schema.source.id,
        "collection": "field-observations",
    }
