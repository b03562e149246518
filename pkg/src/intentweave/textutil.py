"""Small text helpers shared by the parser and serializers."""

from __future__ import annotations

from typing import Iterable

# Joining a fragment that starts with one of these never inserts a space
# before it ("[1] [2]" + "." -> "[1] [2]."). Likewise no space after an
# opening bracket.
_NO_SPACE_BEFORE = ".,;:!?)]}%'\"’”"
_NO_SPACE_AFTER = "([{"


def normalize_ws(text: str) -> str:
    """Collapse all whitespace runs to single spaces and trim the ends."""
    return " ".join(text.split())


def smart_join(parts: Iterable[str]) -> str:
    """Join text fragments with single spaces, except around punctuation."""
    out: list[str] = []
    for part in parts:
        if not part:
            continue
        if out and part[0] not in _NO_SPACE_BEFORE and out[-1][-1] not in _NO_SPACE_AFTER:
            out.append(" ")
        out.append(part)
    return "".join(out)
