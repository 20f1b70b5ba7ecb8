"""Minimal RDF toolkit: graph model, Turtle and RDF/XML parsing and
serialization, and blank-node-aware graph isomorphism.

Covers the subset the registry needs for vocabulary import/export: IRIs,
blank nodes, plain/typed/language-tagged literals, prefixes, property lists,
collections. Parse errors carry line/column positions.
"""

from __future__ import annotations

import hashlib
import re
import xml.etree.ElementTree as ET
from typing import Iterable, Iterator, Optional, Union
from urllib.parse import urljoin
from xml.sax.saxutils import escape, quoteattr

from .errors import ParseFailure


class IRI(str):
    __slots__ = ()

    def __repr__(self):
        return f"<{str.__str__(self)}>"


class BNode(str):
    __slots__ = ()

    def __repr__(self):
        return f"_:{str.__str__(self)}"


class Literal:
    __slots__ = ("value", "lang", "datatype")

    def __init__(self, value: str, lang: Optional[str] = None, datatype: Optional[str] = None):
        self.value = str(value)
        self.lang = lang
        self.datatype = datatype

    def __eq__(self, other):
        return (
            isinstance(other, Literal)
            and self.value == other.value
            and self.lang == other.lang
            and self.datatype == other.datatype
        )

    def __hash__(self):
        return hash((self.value, self.lang, self.datatype))

    def __repr__(self):
        suffix = f"@{self.lang}" if self.lang else (f"^^<{self.datatype}>" if self.datatype else "")
        return f'"{self.value}"{suffix}'


Node = Union[IRI, BNode, Literal]
TripleRow = tuple[Union[IRI, BNode], IRI, Node]


class Namespace(str):
    def __getitem__(self, name: str) -> IRI:
        return IRI(str.__str__(self) + name)


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
SKOS = Namespace("http://www.w3.org/2004/02/skos/core#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
DC = Namespace("http://purl.org/dc/elements/1.1/")
DCTERMS = Namespace("http://purl.org/dc/terms/")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
CC = Namespace("http://creativecommons.org/ns#")

WELL_KNOWN_PREFIXES = {
    "rdf": RDF, "rdfs": RDFS, "skos": SKOS, "owl": OWL,
    "dc": DC, "dcterms": DCTERMS, "xsd": XSD, "cc": CC,
}


class Graph:
    def __init__(self):
        self._triples: set[TripleRow] = set()
        self.namespaces: dict[str, str] = {}

    def bind(self, prefix: str, namespace: str) -> None:
        self.namespaces[prefix] = str(namespace)

    def add(self, triple: TripleRow) -> None:
        self._triples.add(triple)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[TripleRow]:
        return iter(self._triples)

    def __contains__(self, triple: TripleRow) -> bool:
        return triple in self._triples

    def triples(self, s=None, p=None, o=None) -> Iterator[TripleRow]:
        for ts, tp, to in self._triples:
            if (s is None or ts == s) and (p is None or tp == p) and (o is None or to == o):
                yield ts, tp, to

    def subjects(self, p=None, o=None) -> Iterator[Union[IRI, BNode]]:
        seen = set()
        for s, _, _ in self.triples(None, p, o):
            if s not in seen:
                seen.add(s)
                yield s

    def objects(self, s=None, p=None) -> Iterator[Node]:
        for _, _, o in self.triples(s, p, None):
            yield o

    def value(self, s=None, p=None) -> Optional[Node]:
        for o in self.objects(s, p):
            return o
        return None


# -- Turtle tokenizer ---------------------------------------------------------

_IRIREF = re.compile(r'<([^<>"{}|^`\\\x00-\x20]*)>')
_BLANK = re.compile(r"_:([A-Za-z0-9_][A-Za-z0-9_.-]*)")
_PNAME = re.compile(r"((?:[A-Za-z_][A-Za-z0-9_.-]*)?):((?:[A-Za-z0-9_%][A-Za-z0-9_.%-]*)?)")
_LANGTAG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
# decimals need a digit after the dot so "5 ." tokenizes as integer + terminator
_NUMBER = re.compile(r"[+-]?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)")
_IDENT = re.compile(r"[A-Za-z]+")

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
            '"': '"', "'": "'", "\\": "\\"}


class _Token:
    __slots__ = ("kind", "value", "line", "col", "extra")

    def __init__(self, kind, value, line, col, extra=None):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col
        self.extra = extra


def _unescape(raw: str, line: int, col: int) -> str:
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(raw):
            raise ParseFailure("dangling escape in literal", line, col)
        nxt = raw[i + 1]
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt == "u":
            out.append(chr(int(raw[i + 2:i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(raw[i + 2:i + 10], 16)))
            i += 10
        else:
            raise ParseFailure(f"unknown escape \\{nxt}", line, col)
    return "".join(out)


def _tokenize_turtle(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(count: int):
        nonlocal i, line, col
        for _ in range(count):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                advance(1)
            continue
        start_line, start_col = line, col
        if ch == "<":
            m = _IRIREF.match(text, i)
            if not m:
                raise ParseFailure("malformed IRI reference", start_line, start_col)
            tokens.append(_Token("iriref", _unescape(m.group(1), line, col), start_line, start_col))
            advance(m.end() - i)
            continue
        if ch in "\"'":
            quote = ch
            long = text[i:i + 3] == quote * 3
            delim = quote * 3 if long else quote
            j = i + len(delim)
            buf_start = j
            while True:
                if j >= n:
                    raise ParseFailure("unterminated string literal", start_line, start_col)
                if text[j] == "\\":
                    j += 2
                    continue
                if text.startswith(delim, j):
                    break
                j += 1
            raw = text[buf_start:j]
            tokens.append(_Token("string", _unescape(raw, start_line, start_col), start_line, start_col))
            advance(j + len(delim) - i)
            continue
        if text.startswith("^^", i):
            tokens.append(_Token("datatype_marker", "^^", start_line, start_col))
            advance(2)
            continue
        if ch == "@":
            m = _LANGTAG.match(text, i)
            if not m:
                raise ParseFailure("malformed @ directive or language tag", start_line, start_col)
            word = m.group(1)
            kind = "directive" if word in ("prefix", "base") else "langtag"
            tokens.append(_Token(kind, word, start_line, start_col))
            advance(m.end() - i)
            continue
        if ch == "_" and text.startswith("_:", i):
            m = _BLANK.match(text, i)
            if not m:
                raise ParseFailure("malformed blank node label", start_line, start_col)
            label = m.group(1).rstrip(".")
            tokens.append(_Token("bnode", label, start_line, start_col))
            advance(2 + len(label))
            continue
        if ch in ".;,[]()":
            tokens.append(_Token(ch, ch, start_line, start_col))
            advance(1)
            continue
        m = _NUMBER.match(text, i)
        if m and (ch.isdigit() or (ch in "+-." and m.end() > i + 1)):
            tokens.append(_Token("number", m.group(0), start_line, start_col))
            advance(m.end() - i)
            continue
        m = _PNAME.match(text, i)
        if m:
            local = m.group(2)
            trimmed = len(local) - len(local.rstrip("."))
            local = local.rstrip(".")
            tokens.append(_Token("pname", (m.group(1), local), start_line, start_col))
            advance(m.end() - i - trimmed)
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group(0)
            if word == "a" or word in ("true", "false") or word.upper() in ("PREFIX", "BASE"):
                kind = "a" if word == "a" else ("boolean" if word in ("true", "false") else "sparql_directive")
                tokens.append(_Token(kind, word, start_line, start_col))
                advance(len(word))
                continue
        raise ParseFailure(f"unexpected character {ch!r}", start_line, start_col)
    return tokens


class _TurtleParser:
    def __init__(self, tokens: list[_Token], base: str = ""):
        self.tokens = tokens
        self.pos = 0
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.graph = Graph()
        self._bnode_counter = 0

    def _peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self, expected: Optional[str] = None) -> _Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseFailure(
                f"unexpected end of document (wanted {expected or 'more input'})",
                last.line if last else 1, last.col if last else 1,
            )
        if expected is not None and tok.kind != expected:
            raise ParseFailure(f"expected {expected}, found {tok.kind} {tok.value!r}", tok.line, tok.col)
        self.pos += 1
        return tok

    def _fresh_bnode(self) -> BNode:
        self._bnode_counter += 1
        return BNode(f"gen{self._bnode_counter}")

    def parse(self) -> Graph:
        while self._peek() is not None:
            tok = self._peek()
            if tok.kind == "directive":
                self._directive(sparql=False)
            elif tok.kind == "sparql_directive":
                self._directive(sparql=True)
            else:
                self._triples_statement()
        for prefix, ns in self.prefixes.items():
            if prefix:
                self.graph.bind(prefix, ns)
        return self.graph

    def _directive(self, sparql: bool) -> None:
        tok = self._next()
        word = tok.value.lower()
        if word == "prefix":
            name_tok = self._next("pname")
            prefix, local = name_tok.value
            if local:
                raise ParseFailure("prefix declarations take a bare prefix:", name_tok.line, name_tok.col)
            iri_tok = self._next("iriref")
            self.prefixes[prefix] = self._resolve(iri_tok.value)
        elif word == "base":
            iri_tok = self._next("iriref")
            self.base = self._resolve(iri_tok.value)
        else:
            raise ParseFailure(f"unknown directive @{tok.value}", tok.line, tok.col)
        if not sparql:
            self._next(".")

    def _resolve(self, iri: str) -> str:
        if re.match(r"^[A-Za-z][A-Za-z0-9+.-]*:", iri):
            return iri
        if self.base:
            return urljoin(self.base, iri)
        return iri

    def _expand(self, prefix: str, local: str, tok: _Token) -> IRI:
        if prefix not in self.prefixes:
            raise ParseFailure(f"undeclared prefix {prefix!r}", tok.line, tok.col)
        return IRI(self.prefixes[prefix] + local)

    def _triples_statement(self) -> None:
        subject = self._subject()
        self._predicate_object_list(subject)
        self._next(".")

    def _subject(self) -> Union[IRI, BNode]:
        tok = self._peek()
        if tok.kind == "iriref":
            self._next()
            return IRI(self._resolve(tok.value))
        if tok.kind == "pname":
            self._next()
            return self._expand(tok.value[0], tok.value[1], tok)
        if tok.kind == "bnode":
            self._next()
            return BNode(tok.value)
        if tok.kind == "[":
            return self._bnode_property_list()
        if tok.kind == "(":
            return self._collection()
        raise ParseFailure(f"cannot start a subject with {tok.kind} {tok.value!r}", tok.line, tok.col)

    def _verb(self) -> IRI:
        tok = self._peek()
        if tok.kind == "a":
            self._next()
            return RDF["type"]
        if tok.kind == "iriref":
            self._next()
            return IRI(self._resolve(tok.value))
        if tok.kind == "pname":
            self._next()
            return self._expand(tok.value[0], tok.value[1], tok)
        raise ParseFailure(f"expected a predicate, found {tok.kind} {tok.value!r}", tok.line, tok.col)

    def _predicate_object_list(self, subject) -> None:
        while True:
            verb = self._verb()
            while True:
                obj = self._object()
                self.graph.add((subject, verb, obj))
                if self._peek() is not None and self._peek().kind == ",":
                    self._next()
                    continue
                break
            if self._peek() is not None and self._peek().kind == ";":
                while self._peek() is not None and self._peek().kind == ";":
                    self._next()
                nxt = self._peek()
                if nxt is None or nxt.kind in (".", "]"):
                    break  # trailing semicolon
                continue
            break

    def _object(self) -> Node:
        tok = self._peek()
        if tok.kind == "iriref":
            self._next()
            return IRI(self._resolve(tok.value))
        if tok.kind == "pname":
            self._next()
            return self._expand(tok.value[0], tok.value[1], tok)
        if tok.kind == "bnode":
            self._next()
            return BNode(tok.value)
        if tok.kind == "[":
            return self._bnode_property_list()
        if tok.kind == "(":
            return self._collection()
        if tok.kind == "string":
            self._next()
            nxt = self._peek()
            if nxt is not None and nxt.kind == "langtag":
                self._next()
                return Literal(tok.value, lang=nxt.value)
            if nxt is not None and nxt.kind == "datatype_marker":
                self._next()
                dt = self._verb()
                return Literal(tok.value, datatype=str(dt))
            return Literal(tok.value)
        if tok.kind == "number":
            self._next()
            text = tok.value
            if "e" in text.lower():
                dt = XSD["double"]
            elif "." in text:
                dt = XSD["decimal"]
            else:
                dt = XSD["integer"]
            return Literal(text, datatype=str(dt))
        if tok.kind == "boolean":
            self._next()
            return Literal(tok.value, datatype=str(XSD["boolean"]))
        raise ParseFailure(f"cannot parse an object from {tok.kind} {tok.value!r}", tok.line, tok.col)

    def _bnode_property_list(self) -> BNode:
        self._next("[")
        node = self._fresh_bnode()
        if self._peek() is not None and self._peek().kind == "]":
            self._next()
            return node
        self._predicate_object_list(node)
        self._next("]")
        return node

    def _collection(self) -> Union[IRI, BNode]:
        self._next("(")
        items: list[Node] = []
        while True:
            tok = self._peek()
            if tok is None:
                raise ParseFailure("unterminated collection", 0, 0)
            if tok.kind == ")":
                self._next()
                break
            items.append(self._object())
        if not items:
            return RDF["nil"]
        head = self._fresh_bnode()
        node = head
        for idx, item in enumerate(items):
            self.graph.add((node, RDF["first"], item))
            if idx == len(items) - 1:
                self.graph.add((node, RDF["rest"], RDF["nil"]))
            else:
                nxt = self._fresh_bnode()
                self.graph.add((node, RDF["rest"], nxt))
                node = nxt
        return head


def parse_turtle(text: str, base: str = "") -> Graph:
    return _TurtleParser(_tokenize_turtle(text), base=base).parse()


# -- RDF/XML ------------------------------------------------------------------

_XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"
_SYNTAX_ATTRS = {
    "{%s}%s" % (str(RDF), name)
    for name in ("about", "ID", "nodeID", "resource", "datatype", "parseType")
}


def _split_clark(tag: str) -> IRI:
    if tag.startswith("{"):
        ns, local = tag[1:].split("}", 1)
        return IRI(ns + local)
    return IRI(tag)


def _rdf_attr(elem: ET.Element, name: str) -> Optional[str]:
    return elem.get("{%s}%s" % (str(RDF), name))


class _RdfXmlParser:
    def __init__(self, base: str = ""):
        self.base = base
        self.graph = Graph()
        self._counter = 0

    def _fresh(self) -> BNode:
        self._counter += 1
        return BNode(f"x{self._counter}")

    def parse(self, text: Union[str, bytes]) -> Graph:
        try:
            root = ET.fromstring(text)
        except ET.ParseError as exc:
            line, col = exc.position if exc.position else (None, None)
            raise ParseFailure(f"XML syntax error: {str(exc).split(':')[0]}", line, col) from exc
        if _split_clark(root.tag) == RDF["RDF"]:
            nodes = list(root)
        else:
            nodes = [root]
        lang = root.get(_XML_LANG)
        for node in nodes:
            self._node_element(node, lang)
        return self.graph

    def _subject_of(self, elem: ET.Element) -> Union[IRI, BNode]:
        about = _rdf_attr(elem, "about")
        if about is not None:
            return IRI(urljoin(self.base, about) if self.base else about)
        rid = _rdf_attr(elem, "ID")
        if rid is not None:
            return IRI((self.base or "") + "#" + rid)
        node_id = _rdf_attr(elem, "nodeID")
        if node_id is not None:
            return BNode(node_id)
        return self._fresh()

    def _node_element(self, elem: ET.Element, lang: Optional[str]) -> Union[IRI, BNode]:
        subject = self._subject_of(elem)
        lang = elem.get(_XML_LANG, lang)
        tag_iri = _split_clark(elem.tag)
        if tag_iri != RDF["Description"]:
            self.graph.add((subject, RDF["type"], tag_iri))
        for attr, value in elem.attrib.items():
            if attr in _SYNTAX_ATTRS or attr == _XML_LANG or attr.startswith("{http://www.w3.org/2000/xmlns/}"):
                continue
            attr_iri = _split_clark(attr)
            if str(attr_iri).startswith(str(RDF)):
                continue
            self.graph.add((subject, attr_iri, Literal(value, lang=lang)))
        for child in elem:
            self._property_element(subject, child, lang)
        return subject

    def _property_element(self, subject, elem: ET.Element, lang: Optional[str]) -> None:
        predicate = _split_clark(elem.tag)
        lang = elem.get(_XML_LANG, lang)
        resource = _rdf_attr(elem, "resource")
        if resource is not None:
            obj = IRI(urljoin(self.base, resource) if self.base else resource)
            self.graph.add((subject, predicate, obj))
            return
        node_id = _rdf_attr(elem, "nodeID")
        if node_id is not None:
            self.graph.add((subject, predicate, BNode(node_id)))
            return
        if _rdf_attr(elem, "parseType") == "Resource":
            nested = self._fresh()
            self.graph.add((subject, predicate, nested))
            for child in elem:
                self._property_element(nested, child, lang)
            return
        children = list(elem)
        if children:
            obj = self._node_element(children[0], lang)
            self.graph.add((subject, predicate, obj))
            return
        datatype = _rdf_attr(elem, "datatype")
        text = elem.text or ""
        self.graph.add((subject, predicate,
                        Literal(text, lang=None if datatype else lang, datatype=datatype)))


def parse_rdfxml(text: Union[str, bytes], base: str = "") -> Graph:
    return _RdfXmlParser(base=base).parse(text)


# -- serialization ------------------------------------------------------------

_NCNAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*$")
_LOCAL_SAFE = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")


def split_iri(iri: str) -> tuple[str, str]:
    """Split into (namespace, local name) at the last NCName boundary."""
    for idx in range(len(iri) - 1, -1, -1):
        if iri[idx] in "#/:":
            local = iri[idx + 1:]
            if local and _NCNAME.match(local) and not local[0].isdigit():
                return iri[: idx + 1], local
            break
    m = re.search(r"[A-Za-z_][A-Za-z0-9_.-]*$", iri)
    if m and m.start() > 0:
        return iri[: m.start()], iri[m.start():]
    raise ValueError(f"cannot split IRI {iri!r} for XML serialization")


def _prefix_table(graph: Graph, iris: Iterable[str]) -> dict[str, str]:
    table: dict[str, str] = {}
    known = {str(ns): p for p, ns in WELL_KNOWN_PREFIXES.items()}
    known.update({str(ns): p for p, ns in graph.namespaces.items()})
    counter = 0
    for iri in iris:
        try:
            ns, _ = split_iri(iri)
        except ValueError:
            continue
        if ns in table:
            continue
        prefix = known.get(ns)
        if prefix is None or prefix in table.values():
            while f"ns{counter}" in known.values() or f"ns{counter}" in table.values():
                counter += 1
            prefix = f"ns{counter}"
            counter += 1
        table[ns] = prefix
    return table


def serialize_rdfxml(graph: Graph) -> str:
    pred_iris = sorted({str(p) for _, p, _ in graph} | {str(t) for _, p, t in graph if p == RDF["type"]})
    table = _prefix_table(graph, pred_iris)
    table.setdefault(str(RDF), "rdf")
    lines = ["<?xml version=\"1.0\" encoding=\"UTF-8\"?>"]
    decls = " ".join(
        f'xmlns:{prefix}={quoteattr(ns)}' for ns, prefix in sorted(table.items(), key=lambda kv: kv[1])
    )
    lines.append(f"<rdf:RDF {decls}>")

    def qname(iri: str) -> str:
        ns, local = split_iri(iri)
        if ns not in table:
            raise ValueError(f"no prefix for namespace {ns!r}")
        return f"{table[ns]}:{local}"

    subjects = sorted(graph.subjects(), key=lambda s: (isinstance(s, BNode), str(s)))
    for subject in subjects:
        if isinstance(subject, BNode):
            opener = f'  <rdf:Description rdf:nodeID={quoteattr(str(subject))}>'
        else:
            opener = f'  <rdf:Description rdf:about={quoteattr(str(subject))}>'
        lines.append(opener)
        rows = sorted(graph.triples(subject, None, None), key=lambda t: (str(t[1]), _obj_key(t[2])))
        for _, pred, obj in rows:
            q = qname(str(pred))
            if isinstance(obj, Literal):
                attrs = ""
                if obj.lang:
                    attrs += f' xml:lang={quoteattr(obj.lang)}'
                if obj.datatype:
                    attrs += f' rdf:datatype={quoteattr(obj.datatype)}'
                lines.append(f"    <{q}{attrs}>{escape(obj.value)}</{q}>")
            elif isinstance(obj, BNode):
                lines.append(f"    <{q} rdf:nodeID={quoteattr(str(obj))}/>")
            else:
                lines.append(f"    <{q} rdf:resource={quoteattr(str(obj))}/>")
        lines.append("  </rdf:Description>")
    lines.append("</rdf:RDF>")
    return "\n".join(lines) + "\n"


def _obj_key(o: Node) -> str:
    return repr(o)


def _turtle_escape(value: str) -> str:
    return (
        value.replace("\\", "\\\\").replace('"', '\\"')
        .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    )


def serialize_turtle(graph: Graph) -> str:
    iris = {str(p) for _, p, _ in graph}
    iris |= {str(x) for s, _, o in graph for x in (s, o) if isinstance(x, IRI)}
    table = _prefix_table(graph, sorted(iris))

    def render(node: Node) -> str:
        if isinstance(node, Literal):
            base = f'"{_turtle_escape(node.value)}"'
            if node.lang:
                return f"{base}@{node.lang}"
            if node.datatype:
                return f"{base}^^{render(IRI(node.datatype))}"
            return base
        if isinstance(node, BNode):
            return f"_:{node}"
        if node == RDF["type"]:
            return "a"
        try:
            ns, local = split_iri(str(node))
        except ValueError:
            return f"<{node}>"
        if ns in table and _LOCAL_SAFE.match(local):
            return f"{table[ns]}:{local}"
        return f"<{node}>"

    used_ns = set()
    for s, p, o in graph:
        for node in (s, p, o):
            if isinstance(node, IRI) and node != RDF["type"]:
                try:
                    ns, local = split_iri(str(node))
                except ValueError:
                    continue
                if ns in table and _LOCAL_SAFE.match(local):
                    used_ns.add(ns)
            if isinstance(node, Literal) and node.datatype:
                try:
                    ns, local = split_iri(node.datatype)
                except ValueError:
                    continue
                if ns in table and _LOCAL_SAFE.match(local):
                    used_ns.add(ns)

    lines = [f"@prefix {table[ns]}: <{ns}> ." for ns in sorted(used_ns)]
    if lines:
        lines.append("")
    subjects = sorted(graph.subjects(), key=lambda s: (isinstance(s, BNode), str(s)))
    for subject in subjects:
        rows = sorted(graph.triples(subject, None, None), key=lambda t: (str(t[1]) != str(RDF["type"]), str(t[1]), _obj_key(t[2])))
        by_pred: dict[IRI, list[Node]] = {}
        order: list[IRI] = []
        for _, pred, obj in rows:
            if pred not in by_pred:
                by_pred[pred] = []
                order.append(pred)
            by_pred[pred].append(obj)
        parts = [
            f"{render(pred)} " + ", ".join(render(o) for o in by_pred[pred])
            for pred in order
        ]
        lines.append(f"{render(subject)} " + " ;\n    ".join(parts) + " .")
    return "\n".join(lines) + "\n"


# -- graph isomorphism ---------------------------------------------------------

def _signature_round(graph: Graph, colors: dict[BNode, str]) -> dict[BNode, str]:
    def color_of(node: Node) -> str:
        if isinstance(node, BNode):
            return "B" + colors[node]
        return "G" + repr(node)

    new: dict[BNode, str] = {}
    for b in colors:
        edges = []
        for s, p, o in graph:
            if s == b and isinstance(s, BNode):
                edges.append(("out", str(p), color_of(o)))
            if isinstance(o, BNode) and o == b:
                edges.append(("in", str(p), color_of(s)))
        digest = hashlib.sha256(repr(sorted(edges)).encode()).hexdigest()[:16]
        new[b] = digest
    return new


def _refine(graph: Graph) -> dict[BNode, str]:
    bnodes = {n for t in graph for n in (t[0], t[2]) if isinstance(n, BNode)}
    colors: dict[BNode, str] = {b: "" for b in bnodes}
    for _ in range(max(1, len(bnodes))):
        new = _signature_round(graph, colors)
        if new == colors:
            break
        colors = new
    return colors


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """True when the graphs are equal up to blank-node relabeling."""
    if len(g1) != len(g2):
        return False
    ground1 = {t for t in g1 if not isinstance(t[0], BNode) and not isinstance(t[2], BNode)}
    ground2 = {t for t in g2 if not isinstance(t[0], BNode) and not isinstance(t[2], BNode)}
    if ground1 != ground2:
        return False
    c1, c2 = _refine(g1), _refine(g2)
    if sorted(c1.values()) != sorted(c2.values()):
        return False
    by_color1: dict[str, list[BNode]] = {}
    by_color2: dict[str, list[BNode]] = {}
    for b, c in c1.items():
        by_color1.setdefault(c, []).append(b)
    for b, c in c2.items():
        by_color2.setdefault(c, []).append(b)

    triples2 = set(g2)

    def substituted(mapping: dict[BNode, BNode]) -> bool:
        for s, p, o in g1:
            s2 = mapping.get(s, s) if isinstance(s, BNode) else s
            o2 = mapping.get(o, o) if isinstance(o, BNode) else o
            if isinstance(s, BNode) and s not in mapping:
                continue
            if isinstance(o, BNode) and o not in mapping:
                continue
            if (s2, p, o2) not in triples2:
                return False
        return True

    colors_order = sorted(by_color1, key=lambda c: len(by_color1[c]))
    assignment: dict[BNode, BNode] = {}
    used: set[BNode] = set()

    def backtrack(color_idx: int) -> bool:
        if color_idx == len(colors_order):
            return substituted(assignment)
        color = colors_order[color_idx]
        group1 = by_color1[color]
        group2 = by_color2[color]

        def assign(i: int) -> bool:
            if i == len(group1):
                if not substituted(assignment):
                    return False
                return backtrack(color_idx + 1)
            for candidate in group2:
                if candidate in used:
                    continue
                assignment[group1[i]] = candidate
                used.add(candidate)
                if assign(i + 1):
                    return True
                used.discard(candidate)
                del assignment[group1[i]]
            return False

        return assign(0)

    return backtrack(0)
