"""RDF toolkit: Turtle and RDF/XML parsing, serialization round trips, parse
error positions, and the blank-node isomorphism checker."""

from __future__ import annotations

import pytest

from vocabregistry.errors import ParseFailure
from vocabregistry.rdfio import (
    BNode,
    DC,
    Graph,
    IRI,
    Literal,
    RDF,
    RDFS,
    SKOS,
    XSD,
    isomorphic,
    parse_rdfxml,
    parse_turtle,
    serialize_rdfxml,
    serialize_turtle,
    split_iri,
)

EX = "http://example.org/"


class TestTurtleParsing:
    def test_basic_statement(self):
        g = parse_turtle('<http://example.org/a> <http://example.org/p> "hello" .')
        assert (IRI(EX + "a"), IRI(EX + "p"), Literal("hello")) in g

    def test_prefixes_and_a(self):
        g = parse_turtle(
            "@prefix ex: <http://example.org/> .\n"
            "ex:a a ex:Thing ; ex:p ex:b, ex:c .\n"
        )
        assert (IRI(EX + "a"), RDF["type"], IRI(EX + "Thing")) in g
        assert len(list(g.triples(IRI(EX + "a"), IRI(EX + "p"), None))) == 2

    def test_sparql_style_prefix(self):
        g = parse_turtle("PREFIX ex: <http://example.org/>\nex:a ex:p ex:b .")
        assert len(g) == 1

    def test_language_and_datatype_literals(self):
        g = parse_turtle(
            '@prefix ex: <http://example.org/> .\n'
            'ex:a ex:label "chat"@fr ; ex:n "5"^^<http://www.w3.org/2001/XMLSchema#integer> .'
        )
        assert (IRI(EX + "a"), IRI(EX + "label"), Literal("chat", lang="fr")) in g
        assert (IRI(EX + "a"), IRI(EX + "n"), Literal("5", datatype=str(XSD["integer"]))) in g

    def test_numbers_and_booleans(self):
        g = parse_turtle("@prefix ex: <http://example.org/> .\nex:a ex:p 5, 2.5, true .")
        objects = {o.datatype for o in g.objects(IRI(EX + "a"), IRI(EX + "p"))}
        assert objects == {str(XSD["integer"]), str(XSD["decimal"]), str(XSD["boolean"])}

    def test_escapes(self):
        g = parse_turtle('<http://e/s> <http://e/p> "line\\nbreak \\"quoted\\"" .')
        value = next(iter(g))[2].value
        assert value == 'line\nbreak "quoted"'

    def test_long_strings(self):
        g = parse_turtle('<http://e/s> <http://e/p> """multi\nline "quote" ok""" .')
        assert next(iter(g))[2].value == 'multi\nline "quote" ok'

    def test_blank_nodes_and_property_lists(self):
        g = parse_turtle(
            "@prefix ex: <http://example.org/> .\n"
            "_:b ex:p ex:a .\n"
            "ex:c ex:q [ ex:r ex:d ] .\n"
        )
        assert any(isinstance(s, BNode) for s, _, _ in g)
        inner = [t for t in g if t[1] == IRI(EX + "r")]
        assert len(inner) == 1 and isinstance(inner[0][0], BNode)

    def test_collections_expand(self):
        g = parse_turtle("@prefix ex: <http://example.org/> .\nex:a ex:items (ex:x ex:y) .")
        firsts = [t for t in g if t[1] == RDF["first"]]
        rests = [t for t in g if t[1] == RDF["rest"]]
        assert len(firsts) == 2 and len(rests) == 2
        assert any(o == RDF["nil"] for _, _, o in rests)

    def test_comments_ignored(self):
        g = parse_turtle("# intro\n<http://e/s> <http://e/p> <http://e/o> . # trailing\n")
        assert len(g) == 1

    def test_trailing_local_dot_terminates(self):
        g = parse_turtle("@prefix ex: <http://example.org/> .\nex:a ex:p ex:b.")
        assert (IRI(EX + "a"), IRI(EX + "p"), IRI(EX + "b")) in g

    def test_base_resolution(self):
        g = parse_turtle("@base <http://example.org/dir/> .\n<a> <p> <../up> .")
        assert (IRI("http://example.org/dir/a"), IRI("http://example.org/dir/p"),
                IRI("http://example.org/up")) in g

    def test_error_carries_position(self):
        with pytest.raises(ParseFailure) as err:
            parse_turtle("<http://e/s> <http://e/p>\n  @@nope .")
        assert err.value.line == 2

    def test_undeclared_prefix(self):
        with pytest.raises(ParseFailure):
            parse_turtle("nope:a nope:b nope:c .")

    def test_missing_terminator(self):
        with pytest.raises(ParseFailure):
            parse_turtle("<http://e/s> <http://e/p> <http://e/o>")


class TestRdfXmlParsing:
    DOC = """<?xml version="1.0"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
         xmlns:skos="http://www.w3.org/2004/02/skos/core#">
  <skos:Concept rdf:about="http://example.org/c1">
    <skos:prefLabel xml:lang="en">Creator</skos:prefLabel>
    <skos:definition>Responsible entity.</skos:definition>
    <skos:broader rdf:resource="http://example.org/c2"/>
  </skos:Concept>
  <rdf:Description rdf:about="http://example.org/c2">
    <rdfs:label>Agent</rdfs:label>
  </rdf:Description>
</rdf:RDF>
"""

    def test_typed_nodes_and_properties(self):
        g = parse_rdfxml(self.DOC)
        c1 = IRI(EX + "c1")
        assert (c1, RDF["type"], SKOS["Concept"]) in g
        assert (c1, SKOS["prefLabel"], Literal("Creator", lang="en")) in g
        assert (c1, SKOS["broader"], IRI(EX + "c2")) in g

    def test_nested_node_elements(self):
        doc = """<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
                          xmlns:ex="http://example.org/">
          <rdf:Description rdf:about="http://example.org/a">
            <ex:knows><rdf:Description rdf:about="http://example.org/b">
              <ex:name>B</ex:name>
            </rdf:Description></ex:knows>
          </rdf:Description></rdf:RDF>"""
        g = parse_rdfxml(doc)
        assert (IRI(EX + "a"), IRI(EX + "knows"), IRI(EX + "b")) in g
        assert (IRI(EX + "b"), IRI(EX + "name"), Literal("B")) in g

    def test_parse_type_resource(self):
        doc = """<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
                          xmlns:ex="http://example.org/">
          <rdf:Description rdf:about="http://example.org/a">
            <ex:blob rdf:parseType="Resource"><ex:x>1</ex:x></ex:blob>
          </rdf:Description></rdf:RDF>"""
        g = parse_rdfxml(doc)
        blank = [o for _, p, o in g if p == IRI(EX + "blob")][0]
        assert isinstance(blank, BNode)
        assert (blank, IRI(EX + "x"), Literal("1")) in g

    def test_property_attributes(self):
        doc = """<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
                          xmlns:ex="http://example.org/">
          <rdf:Description rdf:about="http://example.org/a" ex:name="A"/></rdf:RDF>"""
        g = parse_rdfxml(doc)
        assert (IRI(EX + "a"), IRI(EX + "name"), Literal("A")) in g

    def test_syntax_error_position(self):
        with pytest.raises(ParseFailure) as err:
            parse_rdfxml("<rdf:RDF xmlns:rdf='http://www.w3.org/1999/02/22-rdf-syntax-ns#'><broken</rdf:RDF>")
        assert err.value.line is not None


def _sample_graph() -> Graph:
    g = Graph()
    a, b = IRI(EX + "a"), IRI(EX + "b")
    g.add((a, RDF["type"], SKOS["Concept"]))
    g.add((a, RDFS["label"], Literal("Alpha")))
    g.add((a, SKOS["related"], b))
    g.add((b, RDFS["label"], Literal("Beta", lang="en")))
    g.add((b, DC["date"], Literal("2021-08-23", datatype=str(XSD["date"]))))
    g.add((BNode("n1"), SKOS["broader"], a))
    g.add((BNode("n1"), RDFS["label"], Literal('odd "label"\nwith breaks')))
    return g


class TestSerialization:
    def test_turtle_round_trip(self):
        g = _sample_graph()
        assert isomorphic(g, parse_turtle(serialize_turtle(g)))

    def test_rdfxml_round_trip(self):
        g = _sample_graph()
        assert isomorphic(g, parse_rdfxml(serialize_rdfxml(g)))

    def test_cross_format_round_trip(self):
        g = _sample_graph()
        assert isomorphic(parse_turtle(serialize_turtle(g)),
                          parse_rdfxml(serialize_rdfxml(g)))

    def test_serialization_deterministic(self):
        g = _sample_graph()
        assert serialize_turtle(g) == serialize_turtle(g)
        assert serialize_rdfxml(g) == serialize_rdfxml(g)

    def test_split_iri(self):
        assert split_iri(str(SKOS["prefLabel"])) == (str(SKOS), "prefLabel")
        assert split_iri("http://purl.org/dc/terms/created") == ("http://purl.org/dc/terms/", "created")


class TestIsomorphism:
    def test_identical(self):
        assert isomorphic(_sample_graph(), _sample_graph())

    def test_bnode_relabeling(self):
        g1 = Graph()
        g1.add((BNode("x"), RDFS["label"], Literal("L")))
        g1.add((BNode("x"), SKOS["broader"], BNode("y")))
        g2 = Graph()
        g2.add((BNode("q"), RDFS["label"], Literal("L")))
        g2.add((BNode("q"), SKOS["broader"], BNode("r")))
        assert isomorphic(g1, g2)

    def test_size_mismatch(self):
        g1, g2 = _sample_graph(), _sample_graph()
        g2.add((IRI(EX + "z"), RDFS["label"], Literal("Z")))
        assert not isomorphic(g1, g2)

    def test_literal_difference_detected(self):
        g1 = Graph()
        g1.add((BNode("x"), RDFS["label"], Literal("L")))
        g2 = Graph()
        g2.add((BNode("x"), RDFS["label"], Literal("M")))
        assert not isomorphic(g1, g2)

    def test_structure_difference_detected(self):
        # A->B, C->D versus A->D, C->B with distinct labels pinned
        def build(edges):
            g = Graph()
            for name in "ABCD":
                g.add((BNode(name.lower()), RDFS["label"], Literal(name)))
            for src, dst in edges:
                g.add((BNode(src.lower()), SKOS["broader"], BNode(dst.lower())))
            return g

        g1 = build([("A", "B"), ("C", "D")])
        g2 = build([("A", "D"), ("C", "B")])
        assert not isomorphic(g1, g2)
        assert isomorphic(g1, build([("A", "B"), ("C", "D")]))

    def test_symmetric_bnode_cluster(self):
        # two interchangeable blank nodes hanging off the same parent
        def build(labels):
            g = Graph()
            parent = IRI(EX + "p")
            for i, lab in enumerate(labels):
                node = BNode(f"b{i}")
                g.add((parent, SKOS["narrower"], node))
                g.add((node, RDFS["label"], Literal(lab)))
            return g

        assert isomorphic(build(["one", "two"]), build(["two", "one"]))
        assert not isomorphic(build(["one", "two"]), build(["one", "three"]))
