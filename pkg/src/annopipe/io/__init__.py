from .brat import emit_brat, parse_brat
from .doccano import emit_doccano_jsonl, parse_doccano_jsonl
from .docjson import parse_document_json, serialize_document_json
from .textdir import load_text_documents

__all__ = [
    "parse_brat",
    "emit_brat",
    "parse_doccano_jsonl",
    "emit_doccano_jsonl",
    "serialize_document_json",
    "parse_document_json",
    "load_text_documents",
]
