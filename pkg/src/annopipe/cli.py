"""Command-line front end: run pipelines, convert formats, evaluate, export provenance.

Exit codes: 0 success, 1 partial failure (some documents failed), 2 config
or usage error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from pathlib import Path

from . import ops  # noqa: F401  (register builtin operations)
from .core import Annotation, Document, Entity, Segment
from .evaluation import (
    MatchSpec,
    compare_runs,
    evaluate,
    format_metrics,
    merge_metrics,
    metrics_to_dict,
)
from .exceptions import AnnopipeError, ConfigError, MissingCounterpartError
from .io.brat import emit_brat, parse_brat
from .io.doccano import emit_doccano_jsonl, parse_doccano_jsonl
from .io.docjson import parse_document_json, serialize_document_json
from .io.textdir import load_text_documents
from .pipeline import PipelineSpec, default_registry, run_pipeline, validate_pipeline
from .provenance import Tracer, VerbosityLevel, build_graph, export_prov, parse_prov_json

OUTPUT_EXTENSIONS = {"brat": ".ann", "doccano": ".jsonl", "json": ".json"}


def _load_pipeline(path: str) -> PipelineSpec:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read pipeline {path}: {exc}") from exc
    spec = PipelineSpec.from_dict(obj)
    issues = validate_pipeline(spec, default_registry())
    if issues:
        raise ConfigError(
            "invalid pipeline: " + "; ".join(i.reason for i in issues)
        )
    return spec


def _collect_annotations(outputs: dict) -> tuple[list[Annotation], list[str]]:
    annotations: list[Annotation] = []
    texts: list[str] = []
    for value in outputs.values():
        items = value if isinstance(value, list) else [value]
        for item in items:
            if isinstance(item, Annotation):
                annotations.append(item)
            elif isinstance(item, str):
                texts.append(item)
    return annotations, texts


def _emit(doc: Document, annotations: list[Annotation], emitted: list[str], fmt: str) -> str:
    if fmt == "brat":
        if emitted:
            return emitted[0]
        return emit_brat(doc, annotations)
    if fmt == "doccano":
        entities = [a for a in annotations if isinstance(a, Entity)]
        return emit_doccano_jsonl(doc, entities) + "\n"
    if fmt == "json":
        for ann in annotations:
            if doc.get_annotation(ann.id) is None:
                doc.attach(ann)
        return serialize_document_json(doc)
    raise ConfigError(f"unknown output format {fmt!r}")


def cmd_run(args) -> int:
    try:
        spec = _load_pipeline(args.pipeline)
        level = VerbosityLevel.parse(args.prov_level)
        if args.workers < 1:
            raise ConfigError("workers must be >= 1")
        docs = load_text_documents(args.input_dir)
    except AnnopipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    extension = OUTPUT_EXTENSIONS.get(args.output_format)
    if extension is None:
        print(f"error: unknown output format {args.output_format!r}", file=sys.stderr)
        return 2

    input_key = spec.pipeline_inputs[0] if spec.pipeline_inputs else "doc"

    def process(doc: Document):
        tracer = Tracer(level)
        outputs = run_pipeline(spec, {input_key: doc}, tracer, default_registry())
        annotations, emitted = _collect_annotations(outputs)
        return doc, tracer, _emit(doc, annotations, emitted, args.output_format)

    failures = []
    tracers = []
    results = {}
    with concurrent.futures.ThreadPoolExecutor(max_workers=args.workers) as pool:
        futures = {pool.submit(process, doc): doc for doc in docs}
        for future, doc in futures.items():
            try:
                results[doc.id] = future.result()
            except Exception as exc:
                failures.append((doc.metadata.get("filename", doc.id), exc))

    for doc in docs:
        if doc.id not in results:
            continue
        _, tracer, payload = results[doc.id]
        stem = Path(doc.metadata.get("filename", doc.id)).stem
        (out_dir / f"{stem}{extension}").write_text(payload, encoding="utf-8")
        tracers.append(tracer)

    if args.prov_out:
        merged = Tracer(level)
        for tracer in tracers:
            merged.merge(tracer)
        graph = build_graph(merged)
        Path(args.prov_out).write_text(export_prov(graph, "prov-json"), encoding="utf-8")

    for name, exc in failures:
        print(f"failed: {name}: {exc}", file=sys.stderr)
    return 1 if failures else 0


def _load_corpus(fmt: str, path: str) -> list[tuple[str, Document]]:
    """(stem, document) pairs with annotations attached."""
    path = Path(path)
    if fmt == "brat":
        pairs = []
        for txt in sorted(path.glob("*.txt")):
            doc = load_text_documents(txt)[0]
            ann_file = txt.with_suffix(".ann")
            if ann_file.exists():
                for ann in parse_brat(ann_file.read_text(encoding="utf-8"), doc.text):
                    doc.attach(ann)
            pairs.append((txt.stem, doc))
        return pairs
    if fmt == "doccano":
        pairs = []
        lines = path.read_text(encoding="utf-8").splitlines()
        for i, line in enumerate(l for l in lines if l.strip()):
            doc, _ = parse_doccano_jsonl(line)
            pairs.append((f"doc_{i + 1:04d}", doc))
        return pairs
    if fmt == "json":
        return [
            (f.stem, parse_document_json(f.read_text(encoding="utf-8")))
            for f in sorted(path.glob("*.json"))
        ]
    raise ConfigError(f"unknown input format {fmt!r}")


def _write_corpus(fmt: str, path: str, pairs: list[tuple[str, Document]]) -> None:
    path = Path(path)
    if fmt == "doccano":
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = []
        for _, doc in pairs:
            entities = [a for a in doc.annotations if isinstance(a, Entity)]
            lines.append(emit_doccano_jsonl(doc, entities))
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        return
    path.mkdir(parents=True, exist_ok=True)
    for stem, doc in pairs:
        if fmt == "brat":
            (path / f"{stem}.txt").write_text(doc.text, encoding="utf-8")
            segments = [a for a in doc.annotations if isinstance(a, Segment)]
            relations = [a for a in doc.annotations if not isinstance(a, Segment)]
            (path / f"{stem}.ann").write_text(
                emit_brat(doc, segments + relations), encoding="utf-8"
            )
        elif fmt == "json":
            (path / f"{stem}.json").write_text(
                serialize_document_json(doc), encoding="utf-8"
            )
        else:
            raise ConfigError(f"unknown output format {fmt!r}")


def cmd_convert(args) -> int:
    try:
        pairs = _load_corpus(args.in_format, args.in_path)
        _write_corpus(args.out_format, args.out_path, pairs)
    except AnnopipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _load_ann_entities(directory: Path) -> dict[str, list[Entity]]:
    out = {}
    for ann_file in sorted(directory.glob("*.ann")):
        txt_file = ann_file.with_suffix(".txt")
        doc_text = txt_file.read_text(encoding="utf-8") if txt_file.exists() else None
        annotations = parse_brat(ann_file.read_text(encoding="utf-8"), doc_text)
        out[ann_file.stem] = [a for a in annotations if isinstance(a, Entity)]
    return out


def _eval_dirs(pred_dir: str, ref_dir: str, spec: MatchSpec):
    pred = _load_ann_entities(Path(pred_dir))
    ref = _load_ann_entities(Path(ref_dir))
    for stem in sorted(set(pred) - set(ref)):
        raise MissingCounterpartError(stem, pred_dir)
    for stem in sorted(set(ref) - set(pred)):
        raise MissingCounterpartError(stem, ref_dir)
    return merge_metrics([evaluate(pred[stem], ref[stem], spec) for stem in sorted(ref)])


def cmd_eval(args) -> int:
    spec = MatchSpec(
        mode=args.mode,
        iou_threshold=args.threshold,
        label_sensitive=not args.label_insensitive,
    )
    try:
        metrics = _eval_dirs(args.pred_dir, args.ref_dir, spec)
        if args.compare_with:
            other = _eval_dirs(args.compare_with, args.ref_dir, spec)
            print(format_metrics(metrics))
            print()
            print(compare_runs(metrics, other, name_a="pred", name_b="compare"))
        else:
            print(format_metrics(metrics))
        if args.json_out:
            Path(args.json_out).write_text(
                json.dumps(metrics_to_dict(metrics), indent=2) + "\n", encoding="utf-8"
            )
    except AnnopipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_prov(args) -> int:
    try:
        graph = parse_prov_json(Path(args.in_path).read_text(encoding="utf-8"))
        payload = export_prov(graph, args.format)
    except (OSError, ValueError, AnnopipeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out_path:
        Path(args.out_path).write_text(payload, encoding="utf-8")
    else:
        print(payload, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annopipe", description="Clinical text annotation pipelines"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a pipeline over a corpus of .txt files")
    run.add_argument("--pipeline", required=True)
    run.add_argument("--input-dir", required=True)
    run.add_argument("--output-dir", required=True)
    run.add_argument("--output-format", default="brat", choices=sorted(OUTPUT_EXTENSIONS))
    run.add_argument("--prov-level", default="none", choices=["none", "steps", "full"])
    run.add_argument("--prov-out", default=None)
    run.add_argument("--workers", type=int, default=1)
    run.set_defaults(func=cmd_run)

    convert = sub.add_parser("convert", help="convert between annotation formats")
    convert.add_argument("--in-format", required=True)
    convert.add_argument("--out-format", required=True)
    convert.add_argument("--in", dest="in_path", required=True)
    convert.add_argument("--out", dest="out_path", required=True)
    convert.set_defaults(func=cmd_convert)

    ev = sub.add_parser("eval", help="entity-level evaluation of .ann directories")
    ev.add_argument("--pred-dir", required=True)
    ev.add_argument("--ref-dir", required=True)
    ev.add_argument("--mode", default="exact", choices=["exact", "overlap"])
    ev.add_argument("--threshold", type=float, default=0.5)
    ev.add_argument("--label-insensitive", action="store_true")
    ev.add_argument("--json-out", default=None)
    ev.add_argument("--compare-with", default=None)
    ev.set_defaults(func=cmd_eval)

    prov = sub.add_parser("prov", help="provenance utilities")
    prov_sub = prov.add_subparsers(dest="prov_command", required=True)
    export = prov_sub.add_parser("export", help="re-export a prov-json graph")
    export.add_argument("--in", dest="in_path", required=True)
    export.add_argument("--format", default="dot", choices=["dot", "prov-json"])
    export.add_argument("--out", dest="out_path", default=None)
    export.set_defaults(func=cmd_prov)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
