"""Run statistics: per-pass additions, duplicate removals, final count."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ZeroInitial
from .lexicon import PASS_ORDER, Origin


@dataclass(frozen=True)
class StatsReport:
    initial: int
    per_pass: dict[Origin, tuple[int, int]]  # pass -> (added, percentage)
    duplicates_removed: int
    rejected: int
    final: int

    @property
    def total_added(self) -> int:
        return sum(count for count, _ in self.per_pass.values())


def percentage(added: int, initial: int) -> int:
    """Integer percentage of ``added`` against ``initial``, rounded half
    away from zero (14.49 -> 14, 2.75 -> 3)."""
    if initial == 0:
        raise ZeroInitial("cannot compute a percentage against an empty lexicon")
    return (200 * added + initial) // (2 * initial)


def compute_stats(
    initial: int,
    added: Mapping[Origin, int],
    duplicates_removed: int = 0,
    rejected: int = 0,
) -> StatsReport:
    """Assemble the report; final = initial + total added - removed - rejected."""
    counts = [initial, duplicates_removed, rejected, *added.values()]
    if any(count < 0 for count in counts):
        raise ValueError("counts are non-negative")
    if any(origin not in PASS_ORDER for origin in added):
        raise ValueError("added counts must be keyed by pass kinds")
    per_pass = {
        origin: (added[origin], percentage(added[origin], initial))
        for origin in PASS_ORDER
        if origin in added
    }
    total = sum(count for count, _ in per_pass.values())
    final = initial + total - duplicates_removed - rejected
    return StatsReport(initial, per_pass, duplicates_removed, rejected, final)


# =============================================================================
# text rendering
# =============================================================================

_LABELS = {
    Origin.PARAPHRASE_DIRECT: "direct paraphrases",
    Origin.PARAPHRASE_CONSTRUCTION: "construction paraphrases",
    Origin.DELETION: "deletions",
    Origin.PERMUTATION: "permutations",
    Origin.TRANSFORMATION: "transformations",
    Origin.INTENSIFICATION: "intensifications",
}

_GROUPS = (
    ("all paraphrases", (Origin.PARAPHRASE_DIRECT, Origin.PARAPHRASE_CONSTRUCTION)),
    ("all other structures", (Origin.DELETION, Origin.PERMUTATION, Origin.TRANSFORMATION)),
    ("all intensified", (Origin.INTENSIFICATION,)),
)


def _line(label: str, value: str, note: str = "") -> str:
    text = f"{label:<26}{value:>10}"
    return f"{text}  {note}" if note else text


def render_stats(report: StatsReport) -> str:
    """Human-readable summary: one line per pass with its percentage, group
    subtotals, then the removal lines and the final count."""
    lines = [_line("initial entries", f"{report.initial:,}")]
    for origin in PASS_ORDER:
        if origin not in report.per_pass:
            continue
        count, pct = report.per_pass[origin]
        lines.append(_line(_LABELS[origin], f"+{count:,}", f"(+{pct}%)"))
    for label, members in _GROUPS:
        counts = [report.per_pass[o][0] for o in members if o in report.per_pass]
        if len(counts) > 1:
            lines.append(_line(label, f"+{sum(counts):,}"))
    if report.per_pass:
        total = report.total_added
        lines.append(_line("total generated", f"+{total:,}", f"(+{percentage(total, report.initial)}%)"))
    lines.append(_line("duplicates removed", f"-{report.duplicates_removed:,}"))
    lines.append(_line("rejected", f"-{report.rejected:,}"))
    lines.append(_line("final entries", f"{report.final:,}"))
    return "\n".join(lines) + "\n"
