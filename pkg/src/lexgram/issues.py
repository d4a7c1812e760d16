"""Validation issues: flags attached to entries for manual review.

Issues never remove anything from a lexicon; they feed the review report.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class IssueKind(enum.Enum):
    SINGLE_TOKEN_RESIDUE = "single-token-residue"
    AMALGAM_SUSPECT = "amalgam-suspect"
    EMPTY_SURFACE = "empty-surface"
    EMPTY_ENTRY = "empty-entry"
    DUPLICATE_OF_BASE = "duplicate-of-base"
    CROSS_TABLE_DUPLICATE = "cross-table-duplicate"
    AGREEMENT_UNCHECKED = "agreement-unchecked"


@dataclass(frozen=True)
class ValidationIssue:
    kind: IssueKind
    entry_id: str
    detail: str = ""
