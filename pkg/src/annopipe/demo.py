"""Paths to the bundled demo assets (synthetic French clinical corpus)."""

from __future__ import annotations

from pathlib import Path

_DATA = Path(__file__).parent / "data" / "demo"


def corpus_dir() -> Path:
    return _DATA / "corpus"


def reference_dir() -> Path:
    return _DATA / "reference"


def dictionary_path() -> Path:
    return _DATA / "drug_dictionary.csv"


def pipeline_path(name: str) -> Path:
    return _DATA / "pipelines" / f"{name}.json"
