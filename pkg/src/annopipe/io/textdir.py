"""Loading raw text corpora as documents."""

from __future__ import annotations

from pathlib import Path

from ..core import Document, create_document
from ..exceptions import DecodeError


def load_text_documents(path) -> list[Document]:
    """One document per UTF-8 .txt file; a file path loads a single document.

    Documents are returned in filename order; metadata carries the source
    filename under "filename".
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.txt"))
    else:
        files = [path]
    docs = []
    for file in files:
        raw = file.read_bytes()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(str(file), exc.start) from exc
        docs.append(create_document(text, {"filename": file.name}))
    return docs
