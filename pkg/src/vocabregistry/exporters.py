"""Grouped export of terms in four formats: JSON, XML, RDF (RDF/XML carrier),
and SKOS. Term IRIs in RDF output are the local ARK URLs; include_versions
embeds the version-vocabulary map per term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from . import ark as ark_registry
from . import queries
from .errors import ValidationFailed
from .models import Term
from .rdfio import DCTERMS, Graph, IRI, Literal, OWL, RDF, RDFS, SKOS, serialize_rdfxml
from .store import Store

EXPORT_FORMATS = ("json", "xml", "rdf", "skos")

_VERSION_KEY_IRIS = {
    "dcterms:created": DCTERMS["created"],
    "dcterms:modified": DCTERMS["modified"],
    "dcterms:isReplacedBy": DCTERMS["isReplacedBy"],
    "dcterms:replaces": DCTERMS["replaces"],
    "owl:deprecated": OWL["deprecated"],
    "owl:priorVersion": OWL["priorVersion"],
    "owl:versionInfo": OWL["versionInfo"],
    "skos:changeNote": SKOS["changeNote"],
    "skos:historyNote": SKOS["historyNote"],
}


@dataclass
class ExportRequest:
    format: str = "json"
    collection: Optional[str] = None
    schema: Optional[str] = None
    contributor: Optional[str] = None
    tag: Optional[str] = None
    status: Optional[str] = None
    include_versions: bool = False

    def validate(self) -> "ExportRequest":
        if self.format not in EXPORT_FORMATS:
            raise ValidationFailed(
                f"unsupported export format {self.format!r}; expected one of {', '.join(EXPORT_FORMATS)}"
            )
        return self


def export(store: Store, request: ExportRequest, base_url: str = "http://localhost:8000") -> bytes:
    request.validate()
    terms = queries.filter_terms(
        store,
        collection=request.collection,
        schema=request.schema,
        contributor=request.contributor,
        tag=request.tag,
        status=request.status,
    )
    if request.format == "json":
        return _export_json(store, terms, request, base_url)
    if request.format == "xml":
        return _export_xml(store, terms, request)
    return _export_graph(store, terms, request, base_url)


def _ark_url(base_url: str, ark: str) -> str:
    return f"{base_url.rstrip('/')}/{ark}"


def _term_triples(store: Store, terms: list[Term]):
    ids = {t.id for t in terms}
    rows = [tr for tr in store.triples.values() if tr.subject in ids]
    rows.sort(key=lambda tr: (tr.subject, tr.predicate, tr.object))
    return rows


def _export_json(store: Store, terms: list[Term], request: ExportRequest, base_url: str) -> bytes:
    term_rows = []
    for term in terms:
        row = {
            "iri": _ark_url(base_url, term.ark),
            "ark": term.ark,
            "label": term.label,
            "definition": term.definition,
            "status": term.status.value,
            "contributor": store.users[term.contributor].handle
            if term.contributor in store.users else term.contributor,
            "rights": {"kind": term.rights.kind, "link": term.rights.link},
            "consensus_score": term.consensus_score,
            "stability_score": term.stability_score,
            "applicability_score": term.applicability_score,
            "version": term.current_version,
        }
        if request.include_versions:
            row["version_metadata"] = ark_registry.version_metadata(store, term)
        term_rows.append(row)

    triple_rows = []
    for tr in _term_triples(store, terms):
        subject = _ark_url(base_url, store.terms[tr.subject].ark)
        predicate = (
            _ark_url(base_url, store.terms[tr.predicate].ark)
            if tr.predicate in store.terms else tr.predicate
        )
        if not tr.object_is_literal and tr.object in store.terms:
            obj = _ark_url(base_url, store.terms[tr.object].ark)
        else:
            obj = tr.object
        triple_rows.append([subject, predicate, obj])

    doc = {"terms": term_rows, "triples": triple_rows}
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


def _export_xml(store: Store, terms: list[Term], request: ExportRequest) -> bytes:
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<vocabulary>"]
    for term in terms:
        lines.append(
            f'  <term ark={quoteattr(term.ark)} status={quoteattr(term.status.value)} '
            f'version={quoteattr(str(term.current_version))}>'
        )
        lines.append(f"    <label>{escape(term.label)}</label>")
        lines.append(f"    <definition>{escape(term.definition)}</definition>")
        lines.append(
            f'    <scores consensus={quoteattr(repr(term.consensus_score))} '
            f'stability={quoteattr(repr(term.stability_score))} '
            f'applicability={quoteattr(repr(term.applicability_score))}/>'
        )
        rights_link = f" link={quoteattr(term.rights.link)}" if term.rights.link else ""
        lines.append(f'    <rights kind={quoteattr(term.rights.kind)}{rights_link}/>')
        if request.include_versions:
            lines.append("    <versionMetadata>")
            for key, value in ark_registry.version_metadata(store, term).items():
                lines.append(f"      <meta key={quoteattr(key)}>{escape(value)}</meta>")
            lines.append("    </versionMetadata>")
        lines.append("  </term>")
    rows = _term_triples(store, terms)
    if rows:
        lines.append("  <triples>")
        for tr in rows:
            subject = store.terms[tr.subject].ark
            predicate = store.terms[tr.predicate].ark if tr.predicate in store.terms else tr.predicate
            obj = store.terms[tr.object].ark if (not tr.object_is_literal and tr.object in store.terms) else tr.object
            kind = "literal" if tr.object_is_literal else ("term" if tr.object in store.terms else "iri")
            lines.append(
                f"    <triple subject={quoteattr(subject)} predicate={quoteattr(predicate)} "
                f"object={quoteattr(obj)} objectKind={quoteattr(kind)}/>"
            )
        lines.append("  </triples>")
    lines.append("</vocabulary>")
    return ("\n".join(lines) + "\n").encode()


def _export_graph(store: Store, terms: list[Term], request: ExportRequest, base_url: str) -> bytes:
    skos_flavor = request.format == "skos"
    g = Graph()
    node_for: dict[str, IRI] = {t.id: IRI(_ark_url(base_url, t.ark)) for t in terms}
    for term in terms:
        node = node_for[term.id]
        if skos_flavor:
            g.add((node, RDF["type"], SKOS["Concept"]))
            g.add((node, SKOS["prefLabel"], Literal(term.label)))
        else:
            g.add((node, RDFS["label"], Literal(term.label)))
        if term.definition:
            g.add((node, SKOS["definition"], Literal(term.definition)))
        if term.rights.link:
            g.add((node, DCTERMS["rights"], IRI(term.rights.link)))
        if request.include_versions:
            for key, value in ark_registry.version_metadata(store, term).items():
                pred = _VERSION_KEY_IRIS[key]
                if key in ("dcterms:isReplacedBy", "dcterms:replaces", "owl:priorVersion"):
                    g.add((node, pred, IRI(_ark_url(base_url, value))))
                else:
                    g.add((node, pred, Literal(value)))
    for tr in _term_triples(store, terms):
        subject = node_for.get(tr.subject)
        if subject is None:
            continue
        predicate = (
            IRI(_ark_url(base_url, store.terms[tr.predicate].ark))
            if tr.predicate in store.terms else IRI(tr.predicate)
        )
        if tr.object_is_literal:
            obj = Literal(tr.object)
        elif tr.object in store.terms:
            obj = node_for.get(tr.object) or IRI(_ark_url(base_url, store.terms[tr.object].ark))
        else:
            obj = IRI(tr.object)
        g.add((subject, predicate, obj))
    return serialize_rdfxml(g).encode()
