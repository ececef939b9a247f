"""Doccano sequence-labeling JSONL: one JSON object per line.

Layout: {"text": "...", "label": [[start, end, "Label"], ...]}. The format
cannot express discontinuous spans; on export only the first merged fragment
is written and a warning is logged.
"""

from __future__ import annotations

import json
import logging

from ..core import Document, Entity, create_document
from ..exceptions import MalformedJsonError, OutOfBoundsError
from ..spans import Span

logger = logging.getLogger(__name__)


def parse_doccano_jsonl(line: str) -> tuple[Document, list[Entity]]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "text" not in obj:
        raise MalformedJsonError('missing "text" key')
    text = obj["text"]
    labels = obj.get("label", [])
    if "label" in obj and not isinstance(labels, list):
        raise MalformedJsonError('"label" must be a list')
    doc = create_document(text)
    entities = []
    for triple in labels:
        try:
            start, end, label = triple
        except (TypeError, ValueError) as exc:
            raise MalformedJsonError(f"bad label triple {triple!r}") from exc
        if start < 0 or end > len(text) or start > end:
            raise OutOfBoundsError(
                f"label span ({start}, {end}) out of bounds for length {len(text)}"
            )
        entity = Entity(label=label, text=text[start:end], spans=[Span(start, end)])
        doc.attach(entity)
        entities.append(entity)
    return doc, entities


def emit_doccano_jsonl(doc: Document, entities: list[Entity]) -> str:
    """One JSONL line for a document; lossy on discontinuous entities."""
    labels = []
    for entity in entities:
        fragments = entity.normalized_spans()
        if not fragments:
            logger.warning("entity %s projects to nothing; skipped", entity.id)
            continue
        if len(fragments) > 1:
            logger.warning(
                "entity %s is discontinuous; exporting first fragment only", entity.id
            )
        labels.append([fragments[0].start, fragments[0].end, entity.label])
    return json.dumps({"text": doc.text, "label": labels}, ensure_ascii=False)
