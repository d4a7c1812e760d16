"""lexgram: compile lexicon-grammar tables into an extended syntactic lexicon.

The package turns tab-separated grammar tables, a class matrix, and a
feature-extraction script into a structured lexicon of multiword entries,
then mechanically extends it (paraphrases, substructures, transformations,
intensified forms), removes exact duplicates, and flags suspicious output
for manual review.
"""

from .curation import DuplicateRecord, canonical_key, dedup, flag_suspicious, review_report
from .errors import InternalInvariantError, LexgramError
from .expansion import ExpansionRecord, PassConfig, PipelineResult, expand_entry, run_pipeline
from .formats import (
    LexiconDocument,
    TOOL_VERSION,
    export_lexicon,
    export_records,
    import_lexicon,
    load_lexicon,
    parse_records,
    save_lexicon,
)
from .issues import IssueKind, ValidationIssue
from .lexicon import ArgumentSpec, LexEntry, Origin, Provenance, Selection, generate_base
from .realizer import Bindings, MorphoRules, SurfaceForm, realize
from .script import Action, ExtractionScript, ScriptRule, Template, load_script, parse_script
from .stats import StatsReport, compute_stats, render_stats
from .tables import ClassMatrix, LgTable, load_class_matrix, load_table, resolve_features

__version__ = TOOL_VERSION

__all__ = [
    "Action",
    "ArgumentSpec",
    "Bindings",
    "ClassMatrix",
    "DuplicateRecord",
    "ExpansionRecord",
    "ExtractionScript",
    "InternalInvariantError",
    "IssueKind",
    "LexEntry",
    "LexgramError",
    "LexiconDocument",
    "LgTable",
    "MorphoRules",
    "Origin",
    "PassConfig",
    "PipelineResult",
    "Provenance",
    "ScriptRule",
    "Selection",
    "StatsReport",
    "SurfaceForm",
    "Template",
    "ValidationIssue",
    "canonical_key",
    "compute_stats",
    "dedup",
    "expand_entry",
    "export_lexicon",
    "export_records",
    "flag_suspicious",
    "generate_base",
    "import_lexicon",
    "load_class_matrix",
    "load_lexicon",
    "load_script",
    "load_table",
    "parse_records",
    "parse_script",
    "realize",
    "render_stats",
    "resolve_features",
    "review_report",
    "run_pipeline",
    "save_lexicon",
    "__version__",
]
