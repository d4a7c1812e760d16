"""Duplicate filtering and the review queue.

Curation never deletes suspicious entries: heuristic hits become
ValidationIssues for manual review.  Only exact surface duplicates (by
canonical key) are removed, and each removal is logged in a
DuplicateRecord and in the survivor's cross-reference list.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .issues import IssueKind, ValidationIssue
from .lexicon import LexEntry, Origin
from .realizer import SurfaceForm

_WHITESPACE = re.compile(r"\s+")


def canonical_key(surface: SurfaceForm | str) -> str:
    """Normalized comparison key: NFC, typographic apostrophe unified with
    U+0027, case folded, internal whitespace collapsed."""
    text = surface if isinstance(surface, str) else surface.rendered
    text = unicodedata.normalize("NFC", text).replace("’", "'")
    return _WHITESPACE.sub(" ", text).strip().casefold()


@dataclass(frozen=True)
class DuplicateRecord:
    kept: str
    removed: tuple[str, ...]
    key: str


def dedup(entries: list[LexEntry]) -> tuple[list[LexEntry], list[DuplicateRecord]]:
    """Keep one entry per canonical key.

    The survivor is the lowest-ranked entry of its group (base before
    generated, then table, row, pass, ordinal), independent of input order.
    Removed ids are appended to the survivor's cross_refs.  Entries with an
    empty surface never merge; they are review material, not citation forms.
    """
    position = {id(entry): i for i, entry in enumerate(entries)}
    groups: dict[str, list[LexEntry]] = {}
    for entry in entries:
        key = canonical_key(entry.surface)
        if key:
            groups.setdefault(key, []).append(entry)

    removed_ids: set[str] = set()
    duplicates: list[DuplicateRecord] = []
    for key, group in groups.items():
        if len(group) < 2:
            continue
        survivor = min(group, key=lambda e: (e.sort_rank(), position[id(e)]))
        removed = tuple(e.entry_id for e in group if e is not survivor)
        survivor.cross_refs.extend(removed)
        removed_ids.update(removed)
        duplicates.append(DuplicateRecord(survivor.entry_id, removed, key))

    survivors = [e for e in entries if e.entry_id not in removed_ids]
    return survivors, duplicates


def duplicate_issues(
    duplicates: list[DuplicateRecord],
    entries_by_id: dict[str, LexEntry],
) -> list[ValidationIssue]:
    """Issues derived from removals, anchored on the surviving entry.

    A collision across tables is always reported; within one table it is
    only reported when a generated entry collided with its class's own base
    entry.  Variant-variant collisions inside one table stay record-only
    (manual review focuses on cross-entry redundancy).
    """
    issues: list[ValidationIssue] = []
    for dup in duplicates:
        kept = entries_by_id[dup.kept]
        for removed_id in dup.removed:
            removed = entries_by_id[removed_id]
            if removed.table_id != kept.table_id:
                kind = IssueKind.CROSS_TABLE_DUPLICATE
            elif kept.is_base:
                kind = IssueKind.DUPLICATE_OF_BASE
            else:
                continue
            issues.append(ValidationIssue(kind, dup.kept, f"removed duplicate {removed_id}"))
    return issues


# =============================================================================
# review heuristics
# =============================================================================

_BARE_CLITICS = {"ci", "là"}


def flag_suspicious(entry: LexEntry) -> list[ValidationIssue]:
    """Heuristic error detection on one realized entry.

    Flags, never deletes: a single-word surface coming out of a deletion or
    permutation (the structure lost its adverbial frame), a token that kept
    a dangling hyphen or is a clitic particle without its host, an empty
    surface, and any transformation output (agreement is not checked).
    """
    issues: list[ValidationIssue] = []
    words = entry.surface.rendered.split()
    kind = entry.provenance.kind

    if not words:
        issues.append(ValidationIssue(IssueKind.EMPTY_SURFACE, entry.entry_id))
    if kind in (Origin.DELETION, Origin.PERMUTATION) and len(words) == 1:
        issues.append(ValidationIssue(
            IssueKind.SINGLE_TOKEN_RESIDUE, entry.entry_id, f"single token {words[0]!r}",
        ))
    for word in words:
        if word.endswith("-") or word.startswith("-") or word in _BARE_CLITICS:
            issues.append(ValidationIssue(
                IssueKind.AMALGAM_SUSPECT, entry.entry_id, f"token {word!r}",
            ))
            break
    if kind is Origin.TRANSFORMATION:
        issues.append(ValidationIssue(
            IssueKind.AGREEMENT_UNCHECKED, entry.entry_id,
            "gender/number agreement of the inserted material is not checked",
        ))
    return issues


# =============================================================================
# report
# =============================================================================

def review_report(
    issues: list[ValidationIssue],
    duplicates: list[DuplicateRecord],
) -> str:
    """Tab-separated review queue: one line per issue, one per duplicate
    group, grouped by kind and stably ordered."""
    lines = ["record\tkind\tentry\tdetail"]
    for issue in sorted(issues, key=lambda i: (i.kind.value, i.entry_id, i.detail)):
        lines.append(f"ISSUE\t{issue.kind.value}\t{issue.entry_id}\t{issue.detail}")
    for dup in sorted(duplicates, key=lambda d: (d.kept, d.key)):
        lines.append(f"DUPLICATE\t{dup.key}\t{dup.kept}\t{' '.join(dup.removed)}")
    return "\n".join(lines) + "\n"
