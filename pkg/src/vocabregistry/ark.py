"""Archival Resource Key minting, parsing, local resolution, inflections,
persistence statements, and version metadata.

ARKs take the form ark:/NAAN/shoulder+blade. Blades are base-encoded from a
durable counter using a confusion-resistant alphabet (no vowels, no 'l'), so
minting is deterministic and identifiers never collide. Hyphens in an ARK are
identity-insensitive and ignored on lookup.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from .errors import Conflict, NotFound, ValidationFailed
from .models import ArkRecord, PersistenceStatement, StabilityBand, Term, TermStatus, TermVersion
from .store import Store

# betanumeric: digits plus consonants, minus visually ambiguous 'l'
ALPHABET = "0123456789bcdfghjkmnpqrstvwxz"

DEFAULT_NAAN = "99999"  # community test namespace; configure for production
DEFAULT_SHOULDERS = {"term": "y2", "schema": "y3", "collection": "y4"}

_ARK_RE = re.compile(r"^ark:/(\d+)/([a-z]+\d)([0-9a-z]*)$")


@dataclass
class ArkConfig:
    naan: str = DEFAULT_NAAN
    shoulders: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_SHOULDERS))


def encode_blade(n: int) -> str:
    """Base-|ALPHABET| encoding of a positive counter value."""
    if n <= 0:
        raise ValidationFailed("blade counter must be positive")
    digits = []
    base = len(ALPHABET)
    while n:
        n, rem = divmod(n, base)
        digits.append(ALPHABET[rem])
    return "".join(reversed(digits))


def normalize(ark: str) -> str:
    """Hyphens carry no identity; strip them before storage or lookup."""
    return ark.replace("-", "")


def parse(ark: str) -> tuple[str, str, str]:
    """Split an ARK into (naan, shoulder, blade). The shoulder is the leading
    letters up to and including the first digit, per ARK convention."""
    m = _ARK_RE.match(normalize(ark).strip())
    if not m:
        raise ValidationFailed(f"malformed ARK {ark!r}")
    naan, shoulder, blade = m.groups()
    return naan, shoulder, blade


def mint(store: Store, target_kind: str, target_id: str, config: ArkConfig | None = None) -> ArkRecord:
    """Mint the next ARK for a term, schema, or collection. One ARK per
    target; the counter is durable and minting serializes on it."""
    cfg = config or ArkConfig()
    if target_kind not in cfg.shoulders:
        raise ValidationFailed(f"unknown target kind {target_kind!r}")
    with store._ark_lock:
        existing = store.ark_by_target.get((target_kind, target_id))
        if existing is not None:
            raise Conflict(f"{target_kind} {target_id!r} already has ARK {existing}")
        store.ark_counter += 1
        ark = f"ark:/{cfg.naan}/{cfg.shoulders[target_kind]}{encode_blade(store.ark_counter)}"
        record = ArkRecord(ark=ark, target_kind=target_kind, target_id=target_id,
                           minted_at=store.clock())
        store.ark_records[ark] = record
        store.ark_by_target[(target_kind, target_id)] = ark
        return record


def resolve(store: Store, ark: str) -> ArkRecord:
    """Look up an ARK (hyphen-insensitively). Malformed strings are syntax
    errors; well-formed unknown ones are not-found."""
    parse(ark)
    record = store.ark_records.get(normalize(ark).strip())
    if record is None:
        raise NotFound(f"ARK {ark!r} is not registered here")
    return record


def resolve_term(store: Store, ark: str) -> Term:
    record = resolve(store, ark)
    if record.target_kind != "term":
        raise NotFound(f"ARK {ark!r} does not identify a term")
    return store.term(record.target_id)


# -- inflections -------------------------------------------------------------

def inflection_of(target: str) -> tuple[str, str]:
    """Split a raw request target into (ark part, inflection).

    The inflection is "" (plain resolution), "?" (persistence statement) or
    "??" (statement plus full version metadata). "?info" is an accepted
    equivalent of "?" for HTTP stacks that drop a bare trailing question mark.
    A real query string (e.g. "?version=2") is not an inflection.
    """
    for prefix in ("http://", "https://"):
        if target.startswith(prefix):
            target = target[len(prefix):]
            target = target[target.index("/"):] if "/" in target else target
            break
    if target.endswith("??"):
        return target[:-2], "??"
    if target.endswith("?info"):
        return target[:-5], "?"
    if target.endswith("?"):
        return target[:-1], "?"
    if "?" in target:
        return target[: target.index("?")], ""
    return target, ""


def stability_band(stability_score: float) -> StabilityBand:
    if stability_score >= 0.75:
        return StabilityBand.HIGH
    if stability_score >= 0.4:
        return StabilityBand.MEDIUM
    return StabilityBand.LOW


def persistence_statement(store: Store, ark: str) -> PersistenceStatement:
    """Human- and machine-readable persistence summary, derived entirely from
    stored term metadata; regenerating without intervening writes is
    byte-identical."""
    term = resolve_term(store, ark)
    band = stability_band(term.stability_score)
    text = (
        f"{term.ark} identifies the {term.status.value} term '{term.label}', "
        f"version {term.current_version}, created {term.created.date().isoformat()}, "
        f"last modified {term.modified.date().isoformat()}; "
        f"persistence commitment: {band.value} stability."
    )
    return PersistenceStatement(
        ark=term.ark,
        created=term.created,
        modified=term.modified,
        status=term.status,
        current_version=term.current_version,
        stability_band=band,
        statement_text=text,
    )


def target_statement(store: Store, ark: str) -> dict:
    """Statement body for any target kind; terms get the full persistence
    statement, schemas and collections a minimal minted-at summary."""
    record = resolve(store, ark)
    if record.target_kind == "term":
        st = persistence_statement(store, ark)
        return {
            "ark": st.ark,
            "created": st.created.isoformat(),
            "modified": st.modified.isoformat(),
            "status": st.status.value,
            "current_version": st.current_version,
            "stability_band": st.stability_band.value,
            "statement": st.statement_text,
        }
    return {
        "ark": record.ark,
        "target_kind": record.target_kind,
        "minted_at": record.minted_at.isoformat(),
        "statement": f"{record.ark} identifies a {record.target_kind} registered "
                     f"{record.minted_at.date().isoformat()}.",
    }


# -- Rule-10 version metadata -------------------------------------------------

VERSION_METADATA_KEYS = (
    "dcterms:created",
    "dcterms:modified",
    "dcterms:isReplacedBy",
    "dcterms:replaces",
    "owl:deprecated",
    "owl:priorVersion",
    "owl:versionInfo",
    "skos:changeNote",
    "skos:historyNote",
)


def version_metadata(store: Store, term: Term, version: Optional[int] = None) -> dict[str, str]:
    """Version vocabulary map for a term (or one of its historical versions).
    Absent-valued keys are omitted; the key set above is the closed vocabulary."""
    chain = store.versions_for(term.id)
    if version is None:
        version = term.current_version
    by_number = {v.version: v for v in chain}
    if version not in by_number:
        raise NotFound(f"term {term.id!r} has no version {version}")
    entry = by_number[version]
    is_current = version == term.current_version

    meta: dict[str, str] = {}
    meta["dcterms:created"] = term.created.isoformat()
    meta["dcterms:modified"] = (term.modified if is_current else entry.created_at).isoformat()
    if entry.replaced_by is not None:
        meta["dcterms:isReplacedBy"] = _version_ref(term, entry.replaced_by)
    if entry.replaces is not None:
        meta["dcterms:replaces"] = _version_ref(term, entry.replaces)
        meta["owl:priorVersion"] = _version_ref(term, entry.replaces)
    if is_current and term.status is TermStatus.DEPRECATED:
        meta["owl:deprecated"] = "true"
    meta["owl:versionInfo"] = f"version {version}"
    if entry.change_note:
        meta["skos:changeNote"] = entry.change_note
    history = [v.change_note for v in chain if v.version < version and v.change_note]
    if history:
        meta["skos:historyNote"] = "; ".join(history)
    return meta


def _version_ref(term: Term, version: int) -> str:
    return f"{term.ark}?version={version}"


def check_registry(store: Store) -> list[str]:
    """Diagnostics for `mint-check`: every stored ARK must parse, be unique
    (guaranteed by the dict, re-verified on normalization), and lie at or
    below the durable counter."""
    problems: list[str] = []
    seen: dict[str, str] = {}
    for ark, record in store.ark_records.items():
        try:
            _, shoulder, blade = parse(ark)
        except ValidationFailed:
            problems.append(f"unparseable ARK {ark!r}")
            continue
        norm = normalize(ark)
        if norm in seen:
            problems.append(f"duplicate ARK {ark!r} (collides with {seen[norm]!r})")
        seen[norm] = ark
        value = 0
        for ch in blade:
            if ch not in ALPHABET:
                problems.append(f"ARK {ark!r} blade uses characters outside the alphabet")
                break
            value = value * len(ALPHABET) + ALPHABET.index(ch)
        else:
            if value > store.ark_counter:
                problems.append(f"ARK {ark!r} is beyond the mint counter ({store.ark_counter})")
    return problems
