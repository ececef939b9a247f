"""Dictionary NER with word boundaries and leftmost-longest resolution."""

from __future__ import annotations

import csv
import io
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..core import Attribute, Entity, Segment
from ..spans import extract


@dataclass
class DictionaryEntry:
    term: str
    label: str
    norm_id: Optional[str] = None
    case_sensitive: bool = False

    def __post_init__(self):
        if not self.term:
            raise ValueError("dictionary term must be non-empty")


def load_dictionary(path) -> list[DictionaryEntry]:
    """Read a dictionary file: UTF-8, "term,label,norm_id" lines, "#" comments."""
    entries = []
    for raw_line in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        row = next(csv.reader(io.StringIO(line)))
        if len(row) < 2:
            raise ValueError(f"dictionary line needs term and label: {raw_line!r}")
        term, label = row[0].strip(), row[1].strip()
        norm_id = row[2].strip() if len(row) > 2 and row[2].strip() else None
        entries.append(DictionaryEntry(term=term, label=label, norm_id=norm_id))
    return entries


def fold_text(text: str, strip_accents: bool, lower: bool) -> tuple[str, list[int]]:
    """Accent/case folding with a map from folded positions to original indices.

    Folding is per original character so offsets stay recoverable: combining
    marks fold to nothing, characters whose lowercase form changes length are
    kept as-is.
    """
    folded = []
    index_map = []
    for i, ch in enumerate(text):
        out = ch
        if strip_accents:
            out = "".join(
                c
                for c in unicodedata.normalize("NFD", ch)
                if not unicodedata.combining(c)
            )
        if lower:
            low = out.lower()
            if len(low) == len(out):
                out = low
        folded.append(out)
        index_map.extend([i] * len(out))
    return "".join(folded), index_map


def _fold_term(term: str, strip_accents: bool, lower: bool) -> str:
    return fold_text(term, strip_accents, lower)[0]


def _is_word_char(ch: str) -> bool:
    return ch.isalnum()


def match_dictionary(
    seg: Segment, entries: list[DictionaryEntry], strip_accents: bool = False
) -> list[Entity]:
    """Entities for dictionary terms found on word boundaries.

    Overlapping candidates are resolved leftmost-longest. Matching is
    case-insensitive unless the entry is case-sensitive; accents are folded
    when strip_accents. A norm_id entry value becomes a "norm_id" attribute.
    """
    exact_text, exact_map = fold_text(seg.text, strip_accents, lower=False)
    lower_text, lower_map = fold_text(seg.text, strip_accents, lower=True)

    candidates = []
    for entry in entries:
        if entry.case_sensitive:
            haystack, index_map = exact_text, exact_map
        else:
            haystack, index_map = lower_text, lower_map
        needle = _fold_term(entry.term, strip_accents, lower=not entry.case_sensitive)
        if not needle:
            continue
        pos = haystack.find(needle)
        while pos != -1:
            end = pos + len(needle)
            start_ok = pos == 0 or not _is_word_char(haystack[pos - 1])
            end_ok = end == len(haystack) or not _is_word_char(haystack[end])
            if start_ok and end_ok:
                orig_start = index_map[pos]
                orig_end = index_map[end - 1] + 1
                candidates.append((orig_start, orig_end, entry))
            pos = haystack.find(needle, pos + 1)

    candidates.sort(key=lambda c: (c[0], -(c[1] - c[0])))
    entities = []
    last_end = 0
    for start, end, entry in candidates:
        if start < last_end:
            continue
        ent_text, ent_spans = extract(seg.text, seg.spans, [(start, end)])
        attributes = []
        if entry.norm_id is not None:
            attributes.append(Attribute(label="norm_id", value=entry.norm_id))
        entities.append(
            Entity(
                label=entry.label, text=ent_text, spans=ent_spans, attributes=attributes
            )
        )
        last_end = end
    return entities
