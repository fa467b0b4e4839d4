"""Versioned JSON helpers shared by the model file formats."""

from __future__ import annotations

import json

__all__ = ["ModelFormatError", "dump_document", "parse_document", "get_field"]


class ModelFormatError(ValueError):
    """A serialized model document is malformed or has an unsupported version."""


def dump_document(doc: dict) -> str:
    # json round-trips finite doubles exactly via repr
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def get_field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ModelFormatError(f"missing field {key!r} in {where}")
    return obj[key]


def parse_document(text: str, expected_format: str, supported_version: int) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("top-level JSON value must be an object")
    fmt = get_field(doc, "format", "document")
    if fmt != expected_format:
        raise ModelFormatError(f"unexpected format {fmt!r}, expected {expected_format!r}")
    version = get_field(doc, "version", "document")
    if version != supported_version:
        raise ModelFormatError(
            f"unsupported {expected_format} version {version!r} (supported: {supported_version})"
        )
    return doc
