"""The feature-extraction script and its factorized templates.

One script drives every table of a corpus.  A rule line reads

    TABLES : "feature id" => ACTION "template" [, "template" ...]

where TABLES is ``*`` or a comma-separated list of table ids, and ACTION is
one of ``construction``, ``paraphrase``, ``substructure(STRUCTURE)``,
``transformation`` (optional structure argument) or ``intensifier``.
``#`` starts a comment; a trailing backslash continues the line.

Templates mix literal tokens, ``@Column@`` / ``@<ENT>Column@`` placeholders,
symbolic tokens resolved by the realizer (``Ddef``, ``Poss2``, ...) and
non-nested alternation groups ``(a + b)``; a standalone ``E`` inside a group
is the empty alternative.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, replace

from .errors import (
    DuplicateRule,
    MalformedPlaceholder,
    NestedAlternation,
    ScriptSyntaxError,
    UnterminatedGroup,
)
from .tables import ENT_PREFIX, FeatureKind, LgTable, parse_structure_label

# Tokens passed through to the realizer's symbol policy instead of being
# treated as plain literals.  Closed but configurable list.
DEFAULT_SYMBOLIC_TOKENS = frozenset({"Poss2", "Ddef", "N", "Nhum"})


# =============================================================================
# template model
# =============================================================================

@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Symbolic:
    text: str


@dataclass(frozen=True)
class Placeholder:
    name: str
    component: bool  # written @<ENT>name@

    @property
    def text(self) -> str:
        return f"@{ENT_PREFIX if self.component else ''}{self.name}@"


@dataclass(frozen=True)
class Group:
    # Each alternative is a (possibly empty) sequence of non-group parts.
    alternatives: tuple[tuple[object, ...], ...]


Part = object  # Literal | Symbolic | Placeholder | Group


@dataclass(frozen=True)
class Template:
    """A template, factorized (may contain groups) or flat (no groups)."""

    parts: tuple[Part, ...]

    @property
    def is_flat(self) -> bool:
        return not any(isinstance(p, Group) for p in self.parts)

    @property
    def text(self) -> str:
        chunks = []
        for part in self.parts:
            if isinstance(part, Group):
                alts = (" ".join(p.text for p in alt) if alt else "E" for alt in part.alternatives)
                chunks.append("(" + " + ".join(alts) + ")")
            else:
                chunks.append(part.text)
        return " ".join(chunks)


_SPECIAL = set("@()+")


def parse_template(source: str, symbolic: frozenset[str] = DEFAULT_SYMBOLIC_TOKENS) -> Template:
    """Tokenize a template string into parts, validating grouping and markers."""
    parts: list[Part] = []
    group_alts: list[tuple[Part, ...]] | None = None  # None = not inside a group
    current: list[Part] = parts

    def close_alternative():
        nonlocal current
        assert group_alts is not None
        # a lone E inside a group is the empty alternative
        if len(current) == 1 and isinstance(current[0], Literal) and current[0].text == "E":
            group_alts.append(())
        else:
            group_alts.append(tuple(current))
        current = []

    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
        elif ch == "@":
            end = source.find("@", i + 1)
            if end < 0:
                raise MalformedPlaceholder(f"unterminated placeholder in {source!r}")
            name = source[i + 1:end].strip()
            if not name:
                raise MalformedPlaceholder(f"empty placeholder in {source!r}")
            component = name.startswith(ENT_PREFIX)
            if component:
                name = name[len(ENT_PREFIX):].strip()
            current.append(Placeholder(name, component))
            i = end + 1
        elif ch == "(":
            if group_alts is not None:
                raise NestedAlternation(f"nested alternation in {source!r}")
            group_alts = []
            current = []
            i += 1
        elif ch == "+":
            if group_alts is None:
                current.append(Literal("+"))
            else:
                close_alternative()
            i += 1
        elif ch == ")":
            if group_alts is None:
                raise UnterminatedGroup(f"unmatched ')' in {source!r}")
            close_alternative()
            parts.append(Group(tuple(group_alts)))
            group_alts = None
            current = parts
            i += 1
        else:
            j = i
            while j < n and not source[j].isspace() and source[j] not in _SPECIAL:
                j += 1
            word = source[i:j]
            current.append(Symbolic(word) if word in symbolic else Literal(word))
            i = j
    if group_alts is not None:
        raise UnterminatedGroup(f"unterminated '(' in {source!r}")
    return Template(tuple(parts))


def expand_alternation(template: Template) -> list[Template]:
    """Flatten alternation groups into the cartesian product of alternatives.

    Output order is lexicographic over group alternative order, leftmost
    group most significant; output size is the product of the group sizes.
    """
    slots = [p.alternatives if isinstance(p, Group) else None for p in template.parts]
    groups = [alts for alts in slots if alts is not None]
    if not groups:
        return [template]
    flats: list[Template] = []
    for combo in itertools.product(*groups):
        chosen = iter(combo)
        parts: list[Part] = []
        for part, alts in zip(template.parts, slots):
            if alts is None:
                parts.append(part)
            else:
                parts.extend(next(chosen))
        flats.append(Template(tuple(parts)))
    return flats


@dataclass(frozen=True)
class ColumnRef:
    name: str
    component: bool


def template_placeholders(template: Template | str) -> list[ColumnRef]:
    """Ordered column references of a flat template."""
    if isinstance(template, str):
        template = parse_template(template)
    if not template.is_flat:
        raise ValueError("template_placeholders expects a flat template")
    return [ColumnRef(p.name, p.component) for p in template.parts if isinstance(p, Placeholder)]


# =============================================================================
# rules
# =============================================================================

class Action(enum.Enum):
    CONSTRUCTION = "construction"
    PARAPHRASE = "paraphrase"
    SUBSTRUCTURE = "substructure"
    TRANSFORMATION = "transformation"
    INTENSIFIER = "intensifier"


_LABELLED = {Action.SUBSTRUCTURE, Action.TRANSFORMATION}


@dataclass(frozen=True)
class ScriptRule:
    feature_id: str
    tables: frozenset[str] | None  # None = wildcard
    action: Action
    label: str | None
    templates: tuple[Template, ...]
    line: int = 0

    def applies_to(self, table_id: str) -> bool:
        return self.tables is None or table_id in self.tables


@dataclass(frozen=True)
class ExtractionScript:
    rules: tuple[ScriptRule, ...]
    symbolic: frozenset[str] = DEFAULT_SYMBOLIC_TOKENS

    def rules_for(self, table_id: str, action: Action | None = None) -> list[ScriptRule]:
        return [
            r for r in self.rules
            if r.applies_to(table_id) and (action is None or r.action is action)
        ]

    def rule_for(self, table_id: str, feature_id: str) -> ScriptRule | None:
        """First declared rule matching (table, feature); explicit table sets
        take precedence over the wildcard."""
        matches = [r for r in self.rules if r.applies_to(table_id) and r.feature_id == feature_id]
        if not matches:
            return None
        explicit = [r for r in matches if r.tables is not None]
        return (explicit or matches)[0]

    def effective_rules(self, table_id: str, action: Action | None = None) -> list[ScriptRule]:
        """One rule per feature id (same precedence as :meth:`rule_for`),
        in declaration order."""
        chosen: dict[str, ScriptRule] = {}
        for rule in self.rules:
            if not rule.applies_to(table_id):
                continue
            prev = chosen.get(rule.feature_id)
            if prev is None or (prev.tables is None and rule.tables is not None):
                chosen[rule.feature_id] = rule
        ordered = sorted(chosen.values(), key=lambda r: r.line)
        if action is None:
            return ordered
        return [r for r in ordered if r.action is action]


def _strip_comment(line: str) -> str:
    # '#' starts a comment unless it appears inside a quoted template
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


_RULE_RE = re.compile(r'^(?P<tables>[^:"]+?)\s*:\s*"(?P<feature>[^"]+)"\s*=>\s*(?P<rest>.+)$')
_ACTION_RE = re.compile(r"^(?P<action>[a-z]+)\s*(?:\((?P<label>[^()]*)\))?\s*(?P<templates>.*)$", re.S)
_TEMPLATE_LIST_RE = re.compile(r'^\s*(?:"[^"]*"\s*(?:,\s*"[^"]*"\s*)*)?$')


def parse_script(
    text: str,
    source: str | None = None,
    symbolic: frozenset[str] = DEFAULT_SYMBOLIC_TOKENS,
) -> ExtractionScript:
    rules: list[ScriptRule] = []
    seen: set[tuple[str, str]] = set()

    # join continuation lines, remembering where each logical line started
    logical: list[tuple[int, str]] = []
    pending: str | None = None
    pending_line = 0
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = _strip_comment(raw).rstrip()
        if pending is not None:
            line = pending + " " + line.strip()
            lineno = pending_line
            pending = None
        if line.endswith("\\"):
            pending = line[:-1].rstrip()
            pending_line = lineno
            continue
        if line.strip():
            logical.append((lineno, line.strip()))
    if pending is not None:
        raise ScriptSyntaxError("dangling line continuation", source, pending_line)

    for lineno, line in logical:
        m = _RULE_RE.match(line)
        if not m:
            raise ScriptSyntaxError(f"cannot parse rule: {line!r}", source, lineno)
        tables_field = m.group("tables").strip()
        tables = None if tables_field == "*" else frozenset(
            t.strip() for t in tables_field.split(",") if t.strip()
        )
        if tables is not None and not tables:
            raise ScriptSyntaxError("empty table list", source, lineno)
        feature_id = m.group("feature").strip()

        am = _ACTION_RE.match(m.group("rest").strip())
        if not am:
            raise ScriptSyntaxError(f"cannot parse action: {m.group('rest')!r}", source, lineno)
        try:
            action = Action(am.group("action"))
        except ValueError:
            raise ScriptSyntaxError(f"unknown action {am.group('action')!r}", source, lineno) from None
        label = am.group("label")
        if label is not None:
            label = label.strip()
        if action is Action.SUBSTRUCTURE and not label:
            raise ScriptSyntaxError("substructure requires a structure argument", source, lineno)
        if label is not None and action not in _LABELLED:
            raise ScriptSyntaxError(f"{action.value} takes no structure argument", source, lineno)

        template_field = am.group("templates")
        if not _TEMPLATE_LIST_RE.match(template_field):
            raise ScriptSyntaxError(f"malformed template list: {template_field!r}", source, lineno)
        try:
            templates = tuple(
                parse_template(t, symbolic) for t in re.findall(r'"([^"]*)"', template_field)
            )
        except ScriptSyntaxError as err:
            raise type(err)(err.bare_message, source, lineno) from None
        if action is not Action.CONSTRUCTION and not templates:
            raise ScriptSyntaxError(f"{action.value} requires at least one template", source, lineno)

        key = (tables_field, feature_id)
        if key in seen:
            raise DuplicateRule(f"duplicate rule for {feature_id!r} on {tables_field!r}", source, lineno)
        seen.add(key)
        rules.append(ScriptRule(feature_id, tables, action, label, templates, lineno))

    return ExtractionScript(tuple(rules), symbolic)


def load_script(path) -> ExtractionScript:
    from pathlib import Path
    path = Path(path)
    return parse_script(path.read_text(encoding="utf-8"), source=str(path))


# =============================================================================
# feature kind refinement
# =============================================================================

def _is_subsequence(sub: tuple, full: tuple) -> bool:
    it = iter(full)
    return all(any(s == f for f in it) for s in sub)


def classify_substructure(label: str, class_slots: tuple) -> FeatureKind:
    """Deletion keeps the slot order of the class structure; anything that
    reorders (with or without dropping slots) is a permutation."""
    label_syms = tuple(ref.symbol for ref in parse_structure_label(label))
    class_syms = tuple(ref.symbol for ref in class_slots)
    if _is_subsequence(label_syms, class_syms):
        return FeatureKind.DELETION
    return FeatureKind.PERMUTATION


_ACTION_KINDS = {
    Action.CONSTRUCTION: FeatureKind.CONSTRUCTION,
    Action.PARAPHRASE: FeatureKind.PARAPHRASE_DIRECT,
    Action.TRANSFORMATION: FeatureKind.TRANSFORMATION,
    Action.INTENSIFIER: FeatureKind.INTENSIFIER,
}


def resolve_kinds(table: LgTable, script: ExtractionScript) -> LgTable:
    """Refine binary feature kinds using the script's rules for this table."""
    new_features = []
    changed = False
    for fdef in table.features:
        kind = fdef.kind
        if kind is FeatureKind.BINARY:
            rule = script.rule_for(table.table_id, fdef.feature_id)
            if rule is not None:
                if rule.action is Action.SUBSTRUCTURE:
                    kind = classify_substructure(rule.label, table.structure)
                else:
                    kind = _ACTION_KINDS[rule.action]
        if kind is not fdef.kind:
            fdef = replace(fdef, kind=kind)
            changed = True
        new_features.append(fdef)
    if not changed:
        return table
    return LgTable(table.table_id, tuple(new_features), table.structure, table.rows)
