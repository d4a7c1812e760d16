"""Lexicon entries and base generation.

Every table row becomes exactly one base entry.  An entry is self-contained:
besides its surface it carries the component cells, the auxiliary lexical
cells and all binary feature values of its row, so later processing steps
need the script but not the original table files.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .errors import UnboundPlaceholder
from .realizer import (
    DEFAULT_RULES,
    DEFAULT_SYMBOLS,
    Bindings,
    MorphoRules,
    SurfaceForm,
    realize,
)
from .script import (
    Action,
    ExtractionScript,
    Placeholder,
    Template,
    expand_alternation,
)
from .tables import Cell, CellKind, FeatureKind, LgTable

# Auxiliary columns whose cells are reader notes (example verbs, clitics);
# they surface in the entry's usage note, never in citation forms.
NOTE_COLUMNS = ("Ppv", "Précat type")


class Origin(enum.Enum):
    BASE = "base"
    PARAPHRASE_DIRECT = "paraphrase-direct"
    PARAPHRASE_CONSTRUCTION = "paraphrase-construction"
    DELETION = "deletion"
    PERMUTATION = "permutation"
    TRANSFORMATION = "transformation"
    INTENSIFICATION = "intensification"


# Canonical pass order; also the order variants appear in the output lexicon.
PASS_ORDER = (
    Origin.PARAPHRASE_DIRECT,
    Origin.PARAPHRASE_CONSTRUCTION,
    Origin.DELETION,
    Origin.PERMUTATION,
    Origin.TRANSFORMATION,
    Origin.INTENSIFICATION,
)

PASS_TAGS = {
    Origin.PARAPHRASE_DIRECT: "para",
    Origin.PARAPHRASE_CONSTRUCTION: "parac",
    Origin.DELETION: "del",
    Origin.PERMUTATION: "perm",
    Origin.TRANSFORMATION: "trans",
    Origin.INTENSIFICATION: "int",
}


def entry_id(table_id: str, row_index: int, tag: str | None = None, ordinal: int | None = None) -> str:
    """Deterministic entry id: ``TABLE#row`` or ``TABLE#row#tag#ordinal``."""
    if row_index < 1:
        raise ValueError("row_index is 1-based")
    if (tag is None) != (ordinal is None):
        raise ValueError("variant tag and ordinal go together")
    if tag is None:
        return f"{table_id}#{row_index}"
    return f"{table_id}#{row_index}#{tag}#{ordinal}"


class Selection(enum.Enum):
    HUMAN = "human"
    NON_HUMAN = "non-human"
    ANY = "any"
    UNSPECIFIED = "unspecified"


@dataclass(frozen=True)
class ArgumentSpec:
    slot: str  # N0, N1, N2, Poss0, Poss2
    selection: Selection


@dataclass(frozen=True)
class Provenance:
    kind: Origin
    parent: str | None = None
    feature_id: str | None = None
    template: str | None = None

    def __post_init__(self):
        if (self.kind is Origin.BASE) != (self.parent is None):
            raise ValueError("base entries have no parent; variants require one")


@dataclass
class LexEntry:
    entry_id: str
    table_id: str
    category: str
    surface: SurfaceForm
    components: dict[str, str]            # slot symbol -> cell text ("" = empty)
    aux: dict[str, str]                   # aux column -> cell text ("" = empty)
    paraphrases: list[SurfaceForm] = field(default_factory=list)
    other_structures: list[tuple[str, SurfaceForm]] = field(default_factory=list)
    intensified: list[SurfaceForm] = field(default_factory=list)
    arguments: list[ArgumentSpec] = field(default_factory=list)
    construction_ids: list[str] = field(default_factory=list)
    internal_structures: list[str] = field(default_factory=list)
    binary_features: dict[str, bool] = field(default_factory=dict)
    provenance: Provenance = field(default_factory=lambda: Provenance(Origin.BASE))
    cross_refs: list[str] = field(default_factory=list)

    @property
    def is_base(self) -> bool:
        return self.provenance.kind is Origin.BASE

    @property
    def usage_note(self) -> str:
        return " ".join(self.aux[c] for c in NOTE_COLUMNS if self.aux.get(c))

    def bindings(self) -> Bindings:
        return Bindings(self.components, self.aux)

    def sort_rank(self) -> tuple:
        """Duplicate-resolution rank: base before generated, then table,
        row, pass and ordinal.  Lower wins."""
        parts = self.entry_id.split("#")
        row = int(parts[1])
        if self.is_base:
            return (0, self.table_id, row, -1, 0)
        return (1, self.table_id, row, PASS_ORDER.index(self.provenance.kind), int(parts[3]))


# =============================================================================
# base generation
# =============================================================================

_ARGUMENT_RE = re.compile(r"^(N0|N1|N2|Poss0|Poss2) =: (Nhum|N-hum)$")
_ARG_SLOT_ORDER = ("N0", "N1", "N2", "Poss0", "Poss2")


def derive_arguments(binary_features: dict[str, bool]) -> list[ArgumentSpec]:
    """Fold ``X =: Nhum`` / ``X =: N-hum`` feature pairs into argument specs."""
    found: dict[str, dict[str, bool]] = {}
    for fid, value in binary_features.items():
        m = _ARGUMENT_RE.match(fid)
        if m:
            found.setdefault(m.group(1), {})[m.group(2)] = value
    specs = []
    for slot in _ARG_SLOT_ORDER:
        if slot not in found:
            continue
        human = found[slot].get("Nhum", False)
        non_human = found[slot].get("N-hum", False)
        if human and non_human:
            selection = Selection.ANY
        elif human:
            selection = Selection.HUMAN
        elif non_human:
            selection = Selection.NON_HUMAN
        else:
            selection = Selection.UNSPECIFIED
        specs.append(ArgumentSpec(slot, selection))
    return specs


def structure_template(table: LgTable) -> Template:
    """The class structure as a flat template of component placeholders."""
    return Template(tuple(Placeholder(ref.symbol, True) for ref in table.structure))


def _cell_text(cell: Cell) -> str:
    return cell.text if cell.kind is CellKind.LEX else ""


def check_script_bindings(table: LgTable, script: ExtractionScript) -> None:
    """Eagerly verify every placeholder of every applicable rule binds to a
    column of ``table``; raises UnboundPlaceholder otherwise."""
    slot_names = {ref.symbol for ref in table.structure}
    aux_names = {
        f.slot_name for f in table.features if f.kind is FeatureKind.AUX_LEXICAL
    }
    for rule in script.effective_rules(table.table_id):
        for template in rule.templates:
            for flat in expand_alternation(template):
                for part in flat.parts:
                    if not isinstance(part, Placeholder):
                        continue
                    known = slot_names if part.component else (aux_names | slot_names)
                    if part.name not in known:
                        raise UnboundPlaceholder(
                            f"rule {rule.feature_id!r}: placeholder {part.text!r} "
                            f"matches no column of table {table.table_id!r}"
                        )


def generate_base(
    table: LgTable,
    script: ExtractionScript,
    category: str = "adverb",
    symbols=DEFAULT_SYMBOLS,
    rules: MorphoRules = DEFAULT_RULES,
) -> list[LexEntry]:
    """One base entry per table row, in row order.

    Rows realizing to an empty surface are still emitted; curation flags
    them rather than dropping data.
    """
    check_script_bindings(table, script)
    template = structure_template(table)
    label = table.structure_label()
    component_cols = table.columns_of_kind(FeatureKind.ENTRY_COMPONENT)
    aux_cols = table.columns_of_kind(FeatureKind.AUX_LEXICAL)
    construction_rules = {
        r.feature_id for r in script.effective_rules(table.table_id, Action.CONSTRUCTION)
    }

    entries: list[LexEntry] = []
    for i, row in enumerate(table.rows, start=1):
        components = {f.slot_name: _cell_text(table.cell(row, f.feature_id)) for f in component_cols}
        aux = {f.feature_id: _cell_text(table.cell(row, f.feature_id)) for f in aux_cols}
        binary = {
            f.feature_id: table.cell(row, f.feature_id).is_plus
            for f in table.features
            if f.kind not in (FeatureKind.ENTRY_COMPONENT, FeatureKind.AUX_LEXICAL)
        }
        constructions = [fid for fid, value in binary.items() if value and fid in construction_rules]
        surface = realize(template, Bindings(components, aux), symbols, rules)
        entries.append(LexEntry(
            entry_id=entry_id(table.table_id, i),
            table_id=table.table_id,
            category=category,
            surface=surface,
            components=components,
            aux=aux,
            arguments=derive_arguments(binary),
            construction_ids=constructions,
            internal_structures=[label] if label else [],
            binary_features=binary,
        ))
    return entries
