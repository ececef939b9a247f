"""Regex de-identification with placeholder substitution.

Replacement goes through the span engine, so the output chain records which
original ranges each placeholder stands for, and the returned entities keep
the original matched spans.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..core import Entity, Segment
from ..spans import extract, replace


@dataclass
class DeidRule:
    pattern: str
    placeholder: str

    def __post_init__(self):
        if not self.placeholder:
            raise ValueError("placeholder must be non-empty")
        self._compiled = re.compile(self.pattern)

    @property
    def label(self) -> str:
        return self.placeholder.strip("[]") or self.placeholder


def deidentify(seg: Segment, rules: list[DeidRule]) -> tuple[Segment, list[Entity]]:
    """Replace PHI matches with placeholders.

    Returns the transformed segment and one entity per match, labeled by the
    rule's placeholder name and spanning the original matched text.
    Overlapping matches are resolved leftmost-longest.
    """
    candidates = []
    for rule in rules:
        for m in rule._compiled.finditer(seg.text):
            if m.start() < m.end():
                candidates.append((m.start(), m.end(), rule))
    candidates.sort(key=lambda c: (c[0], -(c[1] - c[0])))
    selected = []
    last_end = 0
    for start, end, rule in candidates:
        if start >= last_end:
            selected.append((start, end, rule))
            last_end = end

    entities = []
    for start, end, rule in selected:
        ent_text, ent_spans = extract(seg.text, seg.spans, [(start, end)])
        entities.append(Entity(label=rule.label, text=ent_text, spans=ent_spans))

    ranges = [(s, e) for s, e, _ in selected]
    placeholders = [rule.placeholder for _, _, rule in selected]
    new_text, new_spans = replace(seg.text, seg.spans, ranges, placeholders)
    new_seg = Segment(
        label=seg.label, text=new_text, spans=new_spans, metadata=dict(seg.metadata)
    )
    return new_seg, entities
