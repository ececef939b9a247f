"""annopipe: composable clinical-text annotation pipelines.

Non-destructive text processing with span provenance, rule-based NER and
context detection, Brat/Doccano/JSON converters, PROV-style provenance
tracing, and entity-level evaluation.
"""

from . import ops  # noqa: F401  (populates the default operation registry)
from .core import (
    Annotation,
    Attribute,
    Document,
    Entity,
    Relation,
    Segment,
    attach_annotation,
    create_document,
    full_text_segment,
    get_annotations,
)
from .evaluation import MatchSpec, Metrics, align_entities, compare_runs, evaluate, score
from .pipeline import (
    OperationRegistry,
    PipelineSpec,
    PipelineStep,
    as_operation,
    default_registry,
    register_operation,
    run_pipeline,
    validate_pipeline,
)
from .provenance import (
    OperationDescriptor,
    ProvGraph,
    Tracer,
    VerbosityLevel,
    begin_trace,
    build_graph,
    export_prov,
    parse_prov_json,
)
from .spans import (
    ModifiedSpan,
    Span,
    concatenate,
    extract,
    insert,
    normalize_spans,
    remove,
    replace,
    span_length,
)

__version__ = "0.1.0"

__all__ = [
    "Document",
    "Annotation",
    "Segment",
    "Entity",
    "Relation",
    "Attribute",
    "create_document",
    "attach_annotation",
    "get_annotations",
    "full_text_segment",
    "Span",
    "ModifiedSpan",
    "span_length",
    "extract",
    "replace",
    "remove",
    "insert",
    "concatenate",
    "normalize_spans",
    "OperationDescriptor",
    "Tracer",
    "VerbosityLevel",
    "ProvGraph",
    "begin_trace",
    "build_graph",
    "export_prov",
    "parse_prov_json",
    "PipelineSpec",
    "PipelineStep",
    "OperationRegistry",
    "default_registry",
    "register_operation",
    "as_operation",
    "validate_pipeline",
    "run_pipeline",
    "MatchSpec",
    "Metrics",
    "align_entities",
    "score",
    "evaluate",
    "compare_runs",
]
