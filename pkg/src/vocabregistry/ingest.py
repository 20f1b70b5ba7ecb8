"""Vocabulary import: schema and record parsing for RDF/XML, Turtle, SKOS,
generic XML, and flat JSON term lists, plus source hashing and audits.

Parsers are pure; the import operations write terms/triples through the core
operation layer so every created term carries provenance and a rescore event.
"""

from __future__ import annotations

import hashlib
import json
import urllib.request
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from . import core, rdfio
from .ark import ArkConfig, mint
from .errors import (
    ConfigurationError,
    EmptyImport,
    NotFound,
    ParseFailure,
    UnsupportedFormat,
)
from .models import (
    AuditOutcome,
    AuditResult,
    EventKind,
    RescoreEvent,
    Rights,
    SourceRecord,
    Term,
    TermVersion,
    Triple,
)
from .rdfio import BNode, DC, DCTERMS, CC, Graph, IRI, Literal, OWL, RDF, RDFS, SKOS
from .scoring import Thresholds
from .store import Store

FORMATS = ("rdfxml", "turtle", "skos", "genericxml", "jsonterms")

LABEL_PREDICATES = (SKOS["prefLabel"], RDFS["label"], DC["title"], DCTERMS["title"])
DEFINITION_PREDICATES = (
    SKOS["definition"], RDFS["comment"], DCTERMS["description"], DC["description"],
)
RIGHTS_PREDICATES = (DCTERMS["rights"], DC["rights"], DCTERMS["license"], CC["license"])
# version-vocabulary keys describe a term rather than relate terms; an export
# that embeds them must re-import without growing relation triples
_VERSION_PREDICATES = (
    DCTERMS["created"], DCTERMS["modified"], DCTERMS["isReplacedBy"], DCTERMS["replaces"],
    OWL["deprecated"], OWL["priorVersion"], OWL["versionInfo"],
    SKOS["changeNote"], SKOS["historyNote"], SKOS["inScheme"],
)
_DECORATION = set(map(str, LABEL_PREDICATES + DEFINITION_PREDICATES + RIGHTS_PREDICATES
                      + _VERSION_PREDICATES)) | {str(RDF["type"])}


@dataclass
class ParsedVocabulary:
    subject_terms: list[tuple[str, str, str]]  # (label, definition, IRI)
    predicates: list[str]
    object_terms: list[tuple[str, str]] = field(default_factory=list)  # (label, source IRI)
    triples: list[tuple[str, str, str]] = field(default_factory=list)
    triple_object_kinds: list[str] = field(default_factory=list)  # "term" | "iri" | "literal"
    format: str = "rdfxml"
    rights_link: Optional[str] = None
    source: Optional[SourceRecord] = None


@dataclass
class SchemaImport:
    parsed: ParsedVocabulary
    source: SourceRecord
    schema_ark: str
    created_terms: list[Term] = field(default_factory=list)
    reused_terms: list[Term] = field(default_factory=list)
    created_triples: list[Triple] = field(default_factory=list)


@dataclass
class RecordsImport:
    created_terms: list[Term] = field(default_factory=list)
    reused_terms: list[Term] = field(default_factory=list)
    created_triples: list[Triple] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    collection_ark: Optional[str] = None


def _as_text(document: Union[str, bytes]) -> str:
    return document.decode("utf-8") if isinstance(document, bytes) else document


def _as_bytes(document: Union[str, bytes]) -> bytes:
    return document.encode("utf-8") if isinstance(document, str) else document


def _graph_for(document: Union[str, bytes], format: str) -> Graph:
    text = _as_text(document)
    if format == "rdfxml":
        return rdfio.parse_rdfxml(text)
    if format == "turtle":
        return rdfio.parse_turtle(text)
    if format == "skos":
        # SKOS rides on RDF; sniff the carrier syntax
        if text.lstrip().startswith("<"):
            return rdfio.parse_rdfxml(text)
        return rdfio.parse_turtle(text)
    raise UnsupportedFormat(f"{format!r} is not an RDF format")


def _pick_literal(graph: Graph, node, predicates) -> Optional[str]:
    for pred in predicates:
        values = [o for o in graph.objects(node, pred) if isinstance(o, Literal)]
        if not values:
            continue
        # prefer untagged, then English, then smallest; deterministic
        def rank(lit: Literal):
            if lit.lang is None:
                group = 0
            elif lit.lang.lower().startswith("en"):
                group = 1
            else:
                group = 2
            return (group, lit.value)

        return sorted(values, key=rank)[0].value
    return None


def extract_from_graph(graph: Graph, format: str) -> ParsedVocabulary:
    """Pull labeled terms, their definitions, and inter-term relation triples
    out of an RDF graph."""
    labels: dict = {}
    for node in set(graph.subjects()):
        label = _pick_literal(graph, node, LABEL_PREDICATES)
        if label and label.strip():
            labels[node] = label.strip()
    subject_terms = []
    for node in sorted(labels, key=str):
        definition = _pick_literal(graph, node, DEFINITION_PREDICATES) or ""
        subject_terms.append((labels[node], definition, str(node)))

    triples: list[tuple[str, str, str]] = []
    kinds: list[str] = []
    predicates: set[str] = set()
    for s, p, o in sorted(graph, key=repr):
        if s not in labels or str(p) in _DECORATION:
            continue
        if isinstance(o, Literal):
            triples.append((str(s), str(p), o.value))
            kinds.append("literal")
        elif o in labels:
            triples.append((str(s), str(p), str(o)))
            kinds.append("term")
        else:
            triples.append((str(s), str(p), str(o)))
            kinds.append("iri")
        predicates.add(str(p))

    rights = None
    for node in list(graph.subjects(RDF["type"], OWL["Ontology"])) + \
            list(graph.subjects(RDF["type"], SKOS["ConceptScheme"])) + [None]:
        for pred in RIGHTS_PREDICATES:
            value = graph.value(node, pred) if node is not None else None
            if node is None:
                for s, p, o in graph:
                    if str(p) == str(pred):
                        value = o
                        break
            if value is not None:
                rights = str(value.value) if isinstance(value, Literal) else str(value)
                break
        if rights:
            break

    return ParsedVocabulary(
        subject_terms=subject_terms,
        predicates=sorted(predicates),
        triples=triples,
        triple_object_kinds=kinds,
        format=format,
        rights_link=rights,
    )


_XML_LABEL_ATTRS = ("name", "label", "title")
_XML_LABEL_TAGS = ("label", "name", "title", "prefLabel")
_XML_DEF_TAGS = ("definition", "description", "comment")


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _xml_label(elem: ET.Element) -> Optional[str]:
    for attr in _XML_LABEL_ATTRS:
        if elem.get(attr):
            return elem.get(attr).strip()
    for child in elem:
        if _localname(child.tag).lower() in [t.lower() for t in _XML_LABEL_TAGS] and (child.text or "").strip():
            return child.text.strip()
    return None


def _xml_definition(elem: ET.Element) -> str:
    for attr in ("description", "definition"):
        if elem.get(attr):
            return elem.get(attr).strip()
    for child in elem:
        if _localname(child.tag).lower() in _XML_DEF_TAGS and (child.text or "").strip():
            return child.text.strip()
    if (elem.text or "").strip():
        return elem.text.strip()
    return ""


def extract_from_generic_xml(document: Union[str, bytes]) -> ParsedVocabulary:
    """Element extractor for schema-ish XML that is not RDF: any element with
    a name/label identity becomes a term; nesting becomes an isPartOf triple."""
    try:
        root = ET.fromstring(_as_text(document))
    except ET.ParseError as exc:
        line, col = exc.position if exc.position else (None, None)
        raise ParseFailure(f"XML syntax error: {str(exc).split(':')[0]}", line, col) from exc

    terms: list[tuple[str, str, str]] = []
    triples: list[tuple[str, str, str]] = []
    kinds: list[str] = []
    seen: dict[str, str] = {}

    def iri_for(label: str) -> str:
        return f"urn:x-local:element:{label.lower().replace(' ', '-')}"

    def walk(elem: ET.Element, parent_iri: Optional[str]):
        label = _xml_label(elem)
        iri = parent_iri
        if label:
            iri = iri_for(label)
            if label.lower() not in seen:
                seen[label.lower()] = iri
                terms.append((label, _xml_definition(elem), iri))
            if parent_iri and parent_iri != iri:
                triples.append((iri, str(DCTERMS["isPartOf"]), parent_iri))
                kinds.append("term")
        for child in elem:
            walk(child, iri)

    walk(root, None)
    return ParsedVocabulary(
        subject_terms=terms,
        predicates=sorted({p for _, p, _ in triples}),
        triples=triples,
        triple_object_kinds=kinds,
        format="genericxml",
    )


def extract_from_json(document: Union[str, bytes]) -> ParsedVocabulary:
    """Flat JSON term list: a list (or {"terms": [...]}) of objects with
    label/definition and optional iri; optional top-level "triples"."""
    try:
        data = json.loads(_as_text(document))
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"JSON syntax error: {exc.msg}", exc.lineno, exc.colno) from exc
    rows = data.get("terms", []) if isinstance(data, dict) else data
    if not isinstance(rows, list):
        raise ParseFailure("expected a list of term objects")
    terms = []
    seen = set()
    by_label: dict[str, str] = {}
    for i, row in enumerate(rows):
        if not isinstance(row, dict) or not str(row.get("label", "")).strip():
            raise ParseFailure(f"term entry {i} has no label")
        label = str(row["label"]).strip()
        iri = str(row.get("iri") or f"urn:x-local:term:{label.lower().replace(' ', '-')}")
        if iri in seen:
            continue
        seen.add(iri)
        by_label[label.lower()] = iri
        terms.append((label, str(row.get("definition", "")).strip(), iri))
    triples: list[tuple[str, str, str]] = []
    kinds: list[str] = []
    raw_triples = data.get("triples", []) if isinstance(data, dict) else []
    for s, p, o in raw_triples:
        s_iri = by_label.get(str(s).lower(), str(s))
        o_iri = by_label.get(str(o).lower()) or (str(o) if str(o) in seen else None)
        triples.append((s_iri, str(p), o_iri if o_iri else str(o)))
        kinds.append("term" if o_iri else ("iri" if str(o).startswith(("http://", "https://", "urn:")) else "literal"))
    return ParsedVocabulary(
        subject_terms=terms,
        predicates=sorted({p for _, p, _ in triples}),
        triples=triples,
        triple_object_kinds=kinds,
        format="jsonterms",
    )


def parse_document(document: Union[str, bytes], format: str) -> ParsedVocabulary:
    if format not in FORMATS:
        raise UnsupportedFormat(f"unsupported import format {format!r}; expected one of {', '.join(FORMATS)}")
    if format in ("rdfxml", "turtle", "skos"):
        parsed = extract_from_graph(_graph_for(document, format), format)
    elif format == "genericxml":
        parsed = extract_from_generic_xml(document)
    else:
        parsed = extract_from_json(document)
    return parsed


def comparison_graph(parsed: ParsedVocabulary) -> Graph:
    """Normalized graph for round-trip checks: term nodes become blank nodes
    pinned by an attached label literal, relation triples keep their
    predicates, so two imports compare up to identifier renaming."""
    g = Graph()
    nodes: dict[str, BNode] = {}
    for idx, (label, definition, iri) in enumerate(parsed.subject_terms):
        node = BNode(f"t{idx}")
        nodes[iri] = node
        g.add((node, RDFS["label"], Literal(label)))
        if definition:
            g.add((node, SKOS["definition"], Literal(definition)))
    for (s, p, o), kind in zip(parsed.triples, parsed.triple_object_kinds):
        subject = nodes.get(s)
        if subject is None:
            continue
        if kind == "term" and o in nodes:
            obj = nodes[o]
        elif kind == "literal":
            obj = Literal(o)
        else:
            obj = IRI(o)
        g.add((subject, IRI(p), obj))
    return g


# -- schema import -------------------------------------------------------------

def _hash_document(document: Union[str, bytes], algorithm: str = "sha256") -> str:
    try:
        h = hashlib.new(algorithm)
    except ValueError as exc:
        raise ConfigurationError(f"unknown hash algorithm {algorithm!r}") from exc
    h.update(_as_bytes(document))
    return h.hexdigest()


def _find_term(store: Store, label: str, contributor: str) -> Optional[Term]:
    for term in store.terms.values():
        if term.contributor == contributor and term.label.lower() == label.lower():
            return term
    return None


def import_schema(
    store: Store,
    document: Union[str, bytes],
    format: str,
    contributor: str,
    url: Optional[str] = None,
    thresholds: Optional[Thresholds] = None,
    ark_config: Optional[ArkConfig] = None,
) -> SchemaImport:
    """Parse a schema document into subject terms (stable by default, the
    importer as custodian), materialize relation triples, and record source
    provenance with a content hash."""
    th = thresholds or Thresholds()
    user = store.user(contributor)
    parsed = parse_document(document, format)
    if not parsed.subject_terms:
        raise EmptyImport("no terms could be extracted from the document")

    now = store.clock()
    source = SourceRecord(
        id=store.new_id("src"),
        url=url or f"urn:x-vocabregistry:import:{_hash_document(document)[:12]}",
        content_hash=_hash_document(document),
        hash_algorithm="sha256",
        fetched_at=now,
        rights_link=parsed.rights_link,
    )
    store.sources[source.id] = source
    parsed.source = source
    schema_ark = mint(store, "schema", source.id, ark_config).ark

    result = SchemaImport(parsed=parsed, source=source, schema_ark=schema_ark)
    term_for_iri: dict[str, str] = {}
    for label, definition, iri in parsed.subject_terms:
        existing = _find_term(store, label, user.id)
        if existing is not None:
            term_for_iri[iri] = existing.id
            result.reused_terms.append(existing)
            continue
        term = Term(
            id=store.new_id("t"),
            ark="",
            label=label,
            definition=definition,
            contributor=user.id,
            custodian=user.id,
            created=now,
            modified=now,
            last_interaction=now,
            source=source.id,
            rights=Rights(kind="external", link=parsed.rights_link or source.url),
            consensus_score=th.no_vote_default,
            stability_score=1.0,  # imported from a formal schema: stable by default
            applicability_score=1.0,
            applicability_base=1.0,
        )
        term.ark = mint(store, "term", term.id, ark_config).ark
        store.terms[term.id] = term
        store.versions[(term.id, 1)] = TermVersion(
            term=term.id, version=1, label=label, definition=definition,
            change_note=f"imported from {source.url}", created_at=now,
        )
        term_for_iri[iri] = term.id
        result.created_terms.append(term)
        store.enqueue(RescoreEvent(kind=EventKind.IMPORT, term=term.id, user=user.id))

    for (s, p, o), kind in zip(parsed.triples, parsed.triple_object_kinds):
        subject_id = term_for_iri.get(s)
        if subject_id is None:
            continue
        predicate = term_for_iri.get(p, p)
        if kind == "term" and o in term_for_iri:
            obj, is_literal = term_for_iri[o], False
        elif kind == "literal":
            obj, is_literal = o, True
        else:
            obj, is_literal = o, False
        if store.has_triple(subject_id, predicate, obj):
            continue
        result.created_triples.append(
            core.add_triple(store, subject_id, predicate, obj, object_is_literal=is_literal)
        )

    core.record_action(store, user.id, "import")
    return result


# -- record import ---------------------------------------------------------------

def _parse_records_xml(document: Union[str, bytes]) -> list[tuple[str, list[tuple[str, str]]]]:
    try:
        root = ET.fromstring(_as_text(document))
    except ET.ParseError as exc:
        line, col = exc.position if exc.position else (None, None)
        raise ParseFailure(f"XML syntax error: {str(exc).split(':')[0]}", line, col) from exc
    records = []
    for i, rec in enumerate(root, start=1):
        rec_id = rec.get("id") or _rdf_about(rec) or f"record-{i}"
        fields = [
            (_localname(child.tag), child.text.strip())
            for child in rec
            if (child.text or "").strip()
        ]
        records.append((rec_id, fields))
    return records


def _rdf_about(elem: ET.Element) -> Optional[str]:
    return elem.get("{%s}about" % str(RDF))


def _parse_records_graph(document: Union[str, bytes], format: str) -> list[tuple[str, list[tuple[str, str]]]]:
    graph = _graph_for(document, format)
    records: dict[str, list[tuple[str, str]]] = {}
    for s, p, o in sorted(graph, key=repr):
        if not isinstance(o, Literal) or str(p) == str(RDF["type"]):
            continue
        records.setdefault(str(s), []).append((str(p), o.value))
    return sorted(records.items())


def _parse_records_json(document: Union[str, bytes]) -> list[tuple[str, list[tuple[str, str]]]]:
    try:
        data = json.loads(_as_text(document))
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"JSON syntax error: {exc.msg}", exc.lineno, exc.colno) from exc
    rows = data.get("records", []) if isinstance(data, dict) else data
    if not isinstance(rows, list):
        raise ParseFailure("expected a list of record objects")
    records = []
    for i, row in enumerate(rows, start=1):
        if not isinstance(row, dict):
            raise ParseFailure(f"record {i} is not an object")
        rec_id = str(row.get("@id") or row.get("id") or f"record-{i}")
        fields = []
        for key, value in row.items():
            if key in ("@id", "id"):
                continue
            for item in value if isinstance(value, list) else [value]:
                fields.append((str(key), str(item)))
        records.append((rec_id, fields))
    return records


def import_records(
    store: Store,
    document: Union[str, bytes],
    format: str,
    schema_id: str,
    contributor: str,
    collection_id: Optional[str] = None,
    url: Optional[str] = None,
    thresholds: Optional[Thresholds] = None,
    ark_config: Optional[ArkConfig] = None,
) -> RecordsImport:
    """Import object terms from records encoded against a previously imported
    schema. Object terms dedupe on (lowercased label, schema element); each
    record contributes one triple per recognized field."""
    th = thresholds or Thresholds()
    user = store.user(contributor)
    if schema_id not in store.sources:
        raise NotFound(f"schema {schema_id!r} has not been imported")

    elements: dict[str, Term] = {}
    for term in store.terms.values():
        if term.source == schema_id:
            elements[term.label.lower()] = term

    if format in ("rdfxml", "turtle", "skos"):
        records = _parse_records_graph(document, format)
    elif format == "genericxml":
        records = _parse_records_xml(document)
    elif format == "jsonterms":
        records = _parse_records_json(document)
    else:
        raise UnsupportedFormat(f"unsupported record format {format!r}")
    if not records:
        raise EmptyImport("no records could be extracted from the document")

    now = store.clock()
    result = RecordsImport()
    source = SourceRecord(
        id=store.new_id("src"),
        url=url or f"urn:x-vocabregistry:records:{_hash_document(document)[:12]}",
        content_hash=_hash_document(document),
        hash_algorithm="sha256",
        fetched_at=now,
        collection_id=collection_id,
    )
    store.sources[source.id] = source
    if collection_id:
        if ("collection", collection_id) not in store.ark_by_target:
            result.collection_ark = mint(store, "collection", collection_id, ark_config).ark

    created_here: dict[tuple[str, str], Term] = {}
    for rec_id, fields in records:
        for field_name, value in fields:
            key = _field_key(field_name)
            element = elements.get(key)
            if element is None:
                result.warnings.append(
                    f"record {rec_id!r} references unknown schema element {field_name!r}"
                )
                continue
            dedupe = (value.lower(), element.id)
            term = created_here.get(dedupe) or _find_object_term(store, value, element.id)
            if term is None:
                term = Term(
                    id=store.new_id("t"),
                    ark="",
                    label=value,
                    definition=f"{element.label} value from {collection_id or 'records'}",
                    contributor=user.id,
                    custodian=user.id,
                    created=now,
                    modified=now,
                    last_interaction=now,
                    source=source.id,
                    rights=Rights(kind="external", link=source.url),
                    consensus_score=th.no_vote_default,
                    stability_score=1.0,
                    applicability_score=1.0,
                    applicability_base=1.0,
                )
                term.ark = mint(store, "term", term.id, ark_config).ark
                store.terms[term.id] = term
                store.versions[(term.id, 1)] = TermVersion(
                    term=term.id, version=1, label=value, definition=term.definition,
                    change_note=f"imported from {source.url}", created_at=now,
                )
                created_here[dedupe] = term
                result.created_terms.append(term)
                store.enqueue(RescoreEvent(kind=EventKind.IMPORT, term=term.id, user=user.id))
            elif term not in result.created_terms and term not in result.reused_terms:
                result.reused_terms.append(term)
            if not store.has_triple(term.id, element.id, rec_id):
                result.created_triples.append(
                    core.add_triple(store, term.id, element.id, rec_id, object_is_literal=True)
                )
    core.record_action(store, user.id, "import")
    return result


def _field_key(field_name: str) -> str:
    # graph-shaped records carry predicate IRIs; match on the local name
    name = field_name.rsplit("#", 1)[-1].rsplit("/", 1)[-1]
    return name.lower()


def _find_object_term(store: Store, value: str, element_id: str) -> Optional[Term]:
    for term in store.terms.values():
        if term.label.lower() != value.lower():
            continue
        if any(tr.predicate == element_id for tr in store.triples.values() if tr.subject == term.id):
            return term
    return None


# -- source audits ----------------------------------------------------------------

def default_fetcher(url: str, timeout: float = 10.0) -> bytes:
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read()


def verify_source(
    store: Store,
    source: SourceRecord,
    fetcher: Optional[Callable[[str], bytes]] = None,
) -> AuditResult:
    """Fetch the source URL, hash the body with the recorded algorithm, and
    compare against the stored digest. Network failures are an outcome
    (unreachable), not an error."""
    fetch = fetcher or default_fetcher
    try:
        hashlib.new(source.hash_algorithm)
    except ValueError as exc:
        raise ConfigurationError(f"unknown hash algorithm {source.hash_algorithm!r}") from exc
    checked_at = store.clock()
    try:
        body = fetch(source.url)
    except Exception:
        return AuditResult(source=source.id, outcome=AuditOutcome.UNREACHABLE, checked_at=checked_at)
    digest = _hash_document(body, source.hash_algorithm)
    outcome = AuditOutcome.UNCHANGED if digest == source.content_hash else AuditOutcome.CHANGED
    return AuditResult(source=source.id, outcome=outcome, checked_at=checked_at, new_hash=digest)


def audit_sweep(
    store: Store,
    fetcher: Optional[Callable[[str], bytes]] = None,
    sources: Optional[Iterable[SourceRecord]] = None,
    concurrency: int = 4,
) -> list[AuditResult]:
    """Audit every distinct fetchable source, bounded-concurrently. urn:
    sources are synthetic (no fetchable location) and are skipped."""
    targets = [
        s for s in (sources if sources is not None else store.sources.values())
        if not s.url.startswith("urn:")
    ]
    if not targets:
        return []
    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        results = list(pool.map(lambda s: verify_source(store, s, fetcher), targets))
    return results
