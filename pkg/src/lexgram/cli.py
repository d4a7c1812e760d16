"""Command line driver.

Batch subcommands over the lexicon artifacts:

    compile   tables + class matrix + script -> base lexicon
    extend    base lexicon -> extended lexicon (+ record sidecar, stats)
    validate  lexicon -> review queue
    stats     lexicon + record sidecar -> recomputed statistics
    export    lexicon -> text or XML on stdout or file
    import    lexicon -> schema check, optional format conversion

Exit codes: 0 success, 1 input or usage error, 2 internal invariant
violation.  All outputs are byte-deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .curation import dedup, duplicate_issues, flag_suspicious, review_report
from .errors import InternalInvariantError, LexgramError
from .expansion import PassConfig, run_pipeline
from .formats import (
    LexiconDocument,
    export_lexicon,
    export_records,
    load_lexicon,
    parse_records,
    save_lexicon,
)
from .lexicon import Origin, generate_base
from .realizer import DEFAULT_RULES, DEFAULT_SYMBOLS, load_morpho_rules
from .script import parse_script
from .stats import compute_stats, render_stats
from .tables import load_class_matrix, load_table, resolve_features, validate_table


def parse_symbols(text: str) -> dict[str, str]:
    """Symbol policy file: one ``token = rendering`` per line, # comments."""
    symbols: dict[str, str] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        token, sep, value = line.partition("=")
        if not sep or not token.strip() or not value.strip():
            raise LexgramError(f"bad symbol line: {raw.strip()!r}", line=lineno)
        symbols[token.strip()] = value.strip()
    return symbols


def _load_symbols(path: str | None):
    if path is None:
        return DEFAULT_SYMBOLS
    return parse_symbols(Path(path).read_text(encoding="utf-8"))


def _load_morpho(path: str | None):
    if path is None:
        return DEFAULT_RULES
    return load_morpho_rules(path)


# =============================================================================
# subcommands
# =============================================================================

def cmd_compile(args: argparse.Namespace) -> int:
    script_text = Path(args.script).read_text(encoding="utf-8")
    script = parse_script(script_text, source=str(args.script))
    matrix = load_class_matrix(args.classes)
    morpho = _load_morpho(args.morpho)
    symbols = _load_symbols(args.symbols)

    tables = sorted((load_table(p) for p in args.tables), key=lambda t: t.table_id)
    seen: set[str] = set()
    entries = []
    for table in tables:
        if table.table_id in seen:
            raise LexgramError(f"duplicate table id {table.table_id!r}")
        seen.add(table.table_id)
        table = resolve_features(table, matrix)
        for issue in validate_table(table):
            print(f"warning: {issue.kind.value}\t{issue.entry_id}\t{issue.detail}", file=sys.stderr)
        entries.extend(generate_base(table, script, args.category, symbols, morpho))

    doc = LexiconDocument(entries, tuple(t.table_id for t in tables), script_text)
    save_lexicon(doc, args.output, args.format)
    print(f"compiled {len(entries)} entries from {len(tables)} tables -> {args.output}")
    return 0


def cmd_extend(args: argparse.Namespace) -> int:
    doc = load_lexicon(args.lexicon)
    config = PassConfig.parse(args.passes) if args.passes else PassConfig()
    result = run_pipeline(
        doc.entries,
        doc.script(),
        config,
        _load_symbols(args.symbols),
        _load_morpho(args.morpho),
        max_workers=args.jobs,
    )
    save_lexicon(
        LexiconDocument(result.entries, doc.table_ids, doc.script_source),
        args.output,
        args.format,
    )
    if args.records:
        Path(args.records).write_text(export_records(result.records), encoding="utf-8")
    sys.stdout.write(render_stats(result.stats))
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    doc = load_lexicon(args.lexicon)
    survivors, duplicates = dedup(list(doc.entries))
    issues = duplicate_issues(duplicates, {e.entry_id: e for e in doc.entries})
    for entry in survivors:
        issues.extend(flag_suspicious(entry))
    report = review_report(issues, duplicates)
    if args.output:
        Path(args.output).write_text(report, encoding="utf-8")
        print(f"{len(issues)} issues, {len(duplicates)} duplicate groups -> {args.output}")
    else:
        sys.stdout.write(report)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    doc = load_lexicon(args.lexicon)
    rows = parse_records(Path(args.records).read_text(encoding="utf-8"))
    added: dict[Origin, int] = {}
    duplicates_removed = 0
    removed_bases = 0
    for row in rows:
        if row.status == "duplicate":
            duplicates_removed += 1
        if row.kind is Origin.BASE:
            removed_bases += 1
            continue
        added[row.kind] = added.get(row.kind, 0) + 1
    initial = sum(1 for e in doc.entries if e.is_base) + removed_bases
    report = compute_stats(initial, added, duplicates_removed)
    if report.final != len(doc.entries):
        raise InternalInvariantError(
            f"stats identity violated: recomputed final is {report.final}, "
            f"lexicon holds {len(doc.entries)} entries"
        )
    sys.stdout.write(render_stats(report))
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    text = export_lexicon(load_lexicon(args.lexicon), args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_import(args: argparse.Namespace) -> int:
    doc = load_lexicon(args.lexicon)
    if args.output:
        save_lexicon(doc, args.output, args.format)
    print(f"{len(doc.entries)} entries from {len(doc.table_ids)} tables, schema ok")
    return 0


# =============================================================================
# argument parsing
# =============================================================================

class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; 2 is reserved here for internal
    invariant violations, so remap usage problems to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="lexgram", description="lexicon-grammar table compiler")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("compile", help="build a base lexicon from tables")
    p.add_argument("tables", nargs="+", metavar="TABLE", help=".lgt table files")
    p.add_argument("--classes", required=True, help="class matrix file (.lgm)")
    p.add_argument("--script", required=True, help="feature extraction script (.lgs)")
    p.add_argument("--category", default="adverb", help="grammatical category label")
    p.add_argument("--morpho", help="contraction/elision rule file")
    p.add_argument("--symbols", help="symbol policy file")
    p.add_argument("--format", choices=("text", "xml"), help="output format (default: by suffix)")
    p.add_argument("-o", "--output", required=True, help="output lexicon path")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("extend", help="run the generation passes over a base lexicon")
    p.add_argument("lexicon", help="base lexicon produced by compile")
    p.add_argument("--passes", help="comma-separated pass list (default: all)")
    p.add_argument("--symbols", help="symbol policy file")
    p.add_argument("--morpho", help="contraction/elision rule file")
    p.add_argument("--jobs", type=int, help="thread count for per-entry expansion")
    p.add_argument("--records", help="write the expansion record sidecar here")
    p.add_argument("--format", choices=("text", "xml"), help="output format (default: by suffix)")
    p.add_argument("-o", "--output", required=True, help="output lexicon path")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("validate", help="flag suspicious entries and residual duplicates")
    p.add_argument("lexicon")
    p.add_argument("-o", "--output", help="write the review queue here (default: stdout)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="recompute statistics from the record sidecar")
    p.add_argument("lexicon")
    p.add_argument("--records", required=True, help="record sidecar from extend")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export", help="re-serialize a lexicon")
    p.add_argument("lexicon")
    p.add_argument("--format", choices=("text", "xml"), default="text")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("import", help="check a lexicon file, optionally converting it")
    p.add_argument("lexicon")
    p.add_argument("--format", choices=("text", "xml"), help="output format (default: by suffix)")
    p.add_argument("-o", "--output", help="write the re-serialized lexicon here")
    p.set_defaults(func=cmd_import)

    return parser


def cli(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except LexgramError as err:
        print(f"lexgram: error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"lexgram: error: {err}", file=sys.stderr)
        return 1
    except InternalInvariantError as err:
        print(f"lexgram: internal error: {err}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> int:
    return cli(argv)


if __name__ == "__main__":
    raise SystemExit(main())
