"""Context detection around entities: negation, hypothesis, antecedents.

NegEx-style scoping: a cue before (or after) an entity triggers the context
attribute when it lies within a token window and no terminator intervenes.
The attribute is always emitted, with value False when no cue applies.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..core import Attribute, Entity, Segment
from ..exceptions import ScopeError
from ..spans import Span, normalize_spans


@dataclass
class ContextRuleSet:
    attribute_label: str
    cues_before: list[str] = field(default_factory=list)
    cues_after: list[str] = field(default_factory=list)
    terminators: list[str] = field(default_factory=list)
    max_token_window: int = 5

    def __post_init__(self):
        if not self.cues_before and not self.cues_after:
            raise ValueError("at least one cue list must be non-empty")
        if self.max_token_window < 1:
            raise ValueError("max_token_window must be positive")


_NEGATION_CUES = [
    r"\bpas\b",
    r"\bsans\b",
    r"\baucune?\b",
    r"\babsence de\b",
    r"\bni\b",
]
_DEFAULT_TERMINATORS = [r"\bmais\b", r"\bcependant\b", ",", ";"]

DEFAULT_NEGATION_RULES = ContextRuleSet(
    attribute_label="is_negated",
    cues_before=list(_NEGATION_CUES),
    cues_after=list(_NEGATION_CUES),
    terminators=list(_DEFAULT_TERMINATORS),
)

DEFAULT_HYPOTHESIS_RULES = ContextRuleSet(
    attribute_label="is_hypothesis",
    cues_before=[r"\bsi\b", r"éventuell?e?s?\b", r"\bpossibles?\b", r"\bsuspicion de\b"],
    cues_after=[r"\bpossibles?\b", r"\béventuell?e?s?\b"],
    terminators=list(_DEFAULT_TERMINATORS),
)

DEFAULT_FAMILY_RULES = ContextRuleSet(
    attribute_label="is_family",
    cues_before=[
        r"\bantécédents?\b",
        r"\bATCD\b",
        r"\bfamilia(?:l|le|ux)\b",
        r"\bmère\b",
        r"\bpère\b",
    ],
    cues_after=[r"\bfamilia(?:l|le|ux)\b"],
    terminators=list(_DEFAULT_TERMINATORS),
)


def _original_index_per_char(sentence: Segment) -> list:
    """For each sentence character, its original document index (None if inserted)."""
    out = []
    for span in sentence.spans:
        if isinstance(span, Span):
            out.extend(range(span.start, span.end))
        else:
            out.extend([None] * span.length)
    return out


def _local_range(sentence: Segment, entity: Entity, char_origins: list) -> tuple[int, int]:
    """The entity's [start, end) within the sentence's own text."""
    ent_ranges = normalize_spans(entity.spans)
    if not ent_ranges:
        raise ScopeError(f"entity {entity.id} projects to no original span")
    targets = set()
    for r in ent_ranges:
        targets.update(range(r.start, r.end))
    positions = [i for i, orig in enumerate(char_origins) if orig in targets]
    if not positions:
        raise ScopeError(f"entity {entity.id} lies outside the sentence")
    covered = {char_origins[i] for i in positions}
    if not targets <= covered:
        raise ScopeError(f"entity {entity.id} extends beyond the sentence")
    return positions[0], positions[-1] + 1


def detect_context(
    sentence: Segment, entities: list[Entity], rules: ContextRuleSet
) -> list[tuple[str, Attribute]]:
    """(entity_id, attribute) pairs; one attribute per entity, True or False."""
    text = sentence.text
    char_origins = _original_index_per_char(sentence)
    tokens = [m.span() for m in re.finditer(r"\S+", text)]
    cues_before = [
        m.span() for cue in rules.cues_before for m in re.finditer(cue, text, re.IGNORECASE)
    ]
    cues_after = [
        m.span() for cue in rules.cues_after for m in re.finditer(cue, text, re.IGNORECASE)
    ]
    terminators = [
        m.span() for t in rules.terminators for m in re.finditer(t, text, re.IGNORECASE)
    ]

    def gap_blocked(lo: int, hi: int) -> bool:
        return any(lo <= t_start and t_end <= hi for t_start, t_end in terminators)

    def tokens_between(lo: int, hi: int) -> int:
        return sum(1 for t_start, t_end in tokens if lo <= t_start and t_end <= hi)

    results = []
    for entity in entities:
        ent_start, ent_end = _local_range(sentence, entity, char_origins)
        triggered = any(
            cue_end <= ent_start
            and tokens_between(cue_end, ent_start) <= rules.max_token_window
            and not gap_blocked(cue_end, ent_start)
            for _, cue_end in cues_before
        ) or any(
            cue_start >= ent_end
            and tokens_between(ent_end, cue_start) <= rules.max_token_window
            and not gap_blocked(ent_end, cue_start)
            for cue_start, _ in cues_after
        )
        results.append((entity.id, Attribute(label=rules.attribute_label, value=triggered)))
    return results
