"""Canonical text form and embedding keys.

A text's key is the SHA-256 hex digest of its canonical form: NFC-normalized,
with runs of ASCII whitespace collapsed to single spaces and outer spaces
stripped. The whitespace set is fixed to ``[ \\t\\n\\v\\f\\r]`` so that
independent implementations (e.g. the embedding exporter) can reproduce keys
byte-for-byte without language-specific notions of Unicode whitespace.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata

_WS_RE = re.compile(r"[ \t\n\v\f\r]+")


def collapse_ws(text: str) -> str:
    return _WS_RE.sub(" ", text).strip(" ")


def canonical_text(text: str) -> str:
    return collapse_ws(unicodedata.normalize("NFC", text))


def text_key(text: str) -> str:
    """64-hex embedding key of a text."""
    return hashlib.sha256(canonical_text(text).encode("utf-8")).hexdigest()
