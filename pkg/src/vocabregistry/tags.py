"""Tag services: distinct-lexeme extraction over a term's aggregated text and
usage-ranked type-ahead suggestions.
"""

from __future__ import annotations

import re
from collections import Counter
from importlib import resources
from pathlib import Path
from typing import Optional

from .store import Store

_WORD = re.compile(r"[a-z0-9]+(?:[-'][a-z0-9]+)*")


def load_stopwords(path: Optional[str] = None) -> frozenset[str]:
    if path is not None:
        text = Path(path).read_text()
    else:
        text = resources.files("vocabregistry.data").joinpath("stopwords.txt").read_text()
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


_DEFAULT_STOPWORDS = None


def _stopwords(path: Optional[str]) -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if path is not None:
        return load_stopwords(path)
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = load_stopwords()
    return _DEFAULT_STOPWORDS


def lexemes(text: str, stopwords_path: Optional[str] = None) -> list[str]:
    """Distinct tokens: lowercased, punctuation-stripped, stopwords removed,
    sorted for determinism."""
    stop = _stopwords(stopwords_path)
    found = {w.strip("-'") for w in _WORD.findall(text.lower())}
    return sorted(w for w in found if w and w not in stop)


def extract_lexemes(store: Store, term_id: str, stopwords_path: Optional[str] = None) -> list[str]:
    """Lexemes over the term's definition, its comments, and the labels of
    related terms one triple hop away."""
    term = store.term(term_id)
    pieces = [term.definition]
    pieces.extend(c.body for c in store.comments_for(term_id))
    for triple in store.triples_about(term_id):
        for ref in (triple.subject, triple.predicate, triple.object):
            related = store.terms.get(ref)
            if related is not None and related.id != term_id:
                pieces.append(related.label)
    return lexemes(" ".join(pieces), stopwords_path)


def suggest(store: Store, prefix: str, limit: int = 10) -> list[tuple[str, int]]:
    """Tags beginning with the prefix, ranked by usage count then name."""
    counts: Counter[str] = Counter()
    for comment in store.comments.values():
        counts.update(comment.tags)
    prefix = prefix.lower()
    matches = [(tag, n) for tag, n in counts.items() if tag.startswith(prefix)]
    matches.sort(key=lambda kv: (-kv[1], kv[0]))
    return matches[:limit]
