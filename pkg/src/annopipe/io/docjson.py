"""Native JSON serialization: lossless round-trip of the full core model.

Span encoding: original spans as {"s": int, "e": int}, modified spans as
{"len": int, "replaced": [{"s": .., "e": ..}, ...]}.
"""

from __future__ import annotations

import json

from ..core import Annotation, Attribute, Document, Entity, Relation, Segment
from ..exceptions import MalformedJsonError
from ..spans import AnySpan, ModifiedSpan, Span


def _span_to_obj(span: AnySpan) -> dict:
    if isinstance(span, Span):
        return {"s": span.start, "e": span.end}
    return {"len": span.length, "replaced": [{"s": r.start, "e": r.end} for r in span.replaced]}


def _span_from_obj(obj: dict) -> AnySpan:
    if "len" in obj:
        return ModifiedSpan(
            obj["len"], tuple(Span(r["s"], r["e"]) for r in obj.get("replaced", []))
        )
    return Span(obj["s"], obj["e"])


def _attr_to_obj(attr: Attribute) -> dict:
    return {"id": attr.id, "label": attr.label, "value": attr.value}


def _ann_to_obj(ann: Annotation) -> dict:
    obj = {
        "id": ann.id,
        "label": ann.label,
        "attributes": [_attr_to_obj(a) for a in ann.attributes],
        "metadata": ann.metadata,
    }
    if isinstance(ann, Segment):
        obj["kind"] = "entity" if isinstance(ann, Entity) else "segment"
        obj["text"] = ann.text
        obj["spans"] = [_span_to_obj(s) for s in ann.spans]
    elif isinstance(ann, Relation):
        obj["kind"] = "relation"
        obj["source_id"] = ann.source_id
        obj["target_id"] = ann.target_id
    else:
        obj["kind"] = "annotation"
    return obj


def _ann_from_obj(obj: dict) -> Annotation:
    common = dict(
        id=obj["id"],
        label=obj["label"],
        attributes=[
            Attribute(id=a["id"], label=a["label"], value=a["value"])
            for a in obj.get("attributes", [])
        ],
        metadata=obj.get("metadata", {}),
    )
    kind = obj.get("kind", "annotation")
    if kind in ("segment", "entity"):
        cls = Entity if kind == "entity" else Segment
        return cls(
            text=obj["text"],
            spans=[_span_from_obj(s) for s in obj["spans"]],
            **common,
        )
    if kind == "relation":
        return Relation(source_id=obj["source_id"], target_id=obj["target_id"], **common)
    return Annotation(**common)


def serialize_document_json(doc: Document) -> str:
    obj = {
        "id": doc.id,
        "text": doc.text,
        "metadata": doc.metadata,
        "annotations": [_ann_to_obj(a) for a in doc.annotations],
    }
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def parse_document_json(text: str) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "text" not in obj:
        raise MalformedJsonError('missing "text" key')
    doc = Document(text=obj["text"], metadata=obj.get("metadata", {}))
    if obj.get("id"):
        doc.id = obj["id"]
    for ann_obj in obj.get("annotations", []):
        doc.attach(_ann_from_obj(ann_obj))
    return doc
