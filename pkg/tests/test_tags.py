"""Lexeme extraction and type-ahead tag suggestions."""

from __future__ import annotations

from vocabregistry import core, tags


class TestLexemes:
    def test_normalization_example(self):
        assert tags.lexemes("Metadata quality; metadata ranking.") == [
            "metadata", "quality", "ranking",
        ]

    def test_empty_text(self):
        assert tags.lexemes("") == []

    def test_stopwords_removed(self):
        assert tags.lexemes("the quality of the data is good") == ["data", "good", "quality"]

    def test_custom_stopword_file(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("quality\n")
        assert tags.lexemes("metadata quality", stopwords_path=str(path)) == ["metadata"]

    def test_term_aggregation_includes_comments_and_related_labels(self, store, users):
        term = core.propose_term(store, users["alice"].id, "Coverage",
                                 "Spatial extent of holdings")
        other = core.propose_term(store, users["alice"].id, "Extent", "Scope measure")
        core.add_triple(store, term.id, "http://www.w3.org/2000/01/rdf-schema#seeAlso", other.id)
        core.add_comment(store, users["bob"].id, term.id, "Works for geospatial datasets")
        found = tags.extract_lexemes(store, term.id)
        assert "spatial" in found and "holdings" in found   # definition
        assert "geospatial" in found and "datasets" in found  # comment
        assert "extent" in found                             # related label

    def test_empty_term_text(self, store, users):
        term = core.propose_term(store, users["alice"].id, "X", "the of and")
        assert tags.extract_lexemes(store, term.id) == []


class TestSuggest:
    def test_prefix_filter_and_usage_ranking(self, store, users):
        t1 = core.propose_term(store, users["alice"].id, "T1", "def")
        t2 = core.propose_term(store, users["alice"].id, "T2", "def")
        core.add_comment(store, users["bob"].id, t1.id, "#metadata for #metadata and #metrics")
        core.add_comment(store, users["carol"].id, t2.id, "#metadata #meta")
        core.add_comment(store, users["dave"].id, t2.id, "#other")
        found = tags.suggest(store, "met")
        assert found[0] == ("metadata", 2)  # per-comment dedupe, two comments
        assert ("meta", 1) in found and ("metrics", 1) in found
        assert all(tag.startswith("met") for tag, _ in found)

    def test_empty_prefix_returns_all_ranked(self, store, users):
        t1 = core.propose_term(store, users["alice"].id, "T1", "def")
        core.add_comment(store, users["bob"].id, t1.id, "#a #b")
        assert len(tags.suggest(store, "")) == 2

    def test_no_matches(self, store):
        assert tags.suggest(store, "zzz") == []
