"""Pure-Python scanner backend.

Must stay token-for-token identical to the compiled backend in
``_scan_c.pyx``; the contract lives in ``scanner.py`` and the
equivalence test in ``tests/test_scanner_backends.py``.
"""

from __future__ import annotations

import re

_K_BCIT = 1
_K_ECIT = 2
_K_BPIT = 3
_K_EPIT = 4
_K_CITE = 5
_K_MEMORY = 6
_K_SECTION = 7
_K_TLDR = 8
_K_BREAK = 9

_TAG_KINDS = {
    "<bcit>": _K_BCIT,
    "<ecit>": _K_ECIT,
    "<bpit>": _K_BPIT,
    "<epit>": _K_EPIT,
}

# One combined pattern; group names select the token kind. Digits are
# ASCII-only on purpose: \d would also match non-ASCII digits, which the
# compiled backend does not.
_MASTER = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<tag><bcit>|<ecit>|<bpit>|<epit>)"
    r"|(?P<mem>\[LLM MEMORY \| (?P<year>[0-9]+)\])"
    r"|(?P<cite>\[(?:[Cc][Ii][Tt][Aa][Tt][Ii][Oo][Nn] )?(?P<num>[0-9]+)\])"
    r"|(?P<marker>SECTION;|TLDR;)"
)


def _at_line_start(text: str, pos: int) -> bool:
    # Only spaces and tabs may sit between the line break and the marker.
    i = pos - 1
    while i >= 0 and text[i] in " \t":
        i -= 1
    return i < 0 or text[i] == "\n"


def tokenize(text: str) -> list:
    tokens = []
    for m in _MASTER.finditer(text):
        start, end = m.start(), m.end()
        if m.group("ws") is not None:
            if m.group("ws").count("\n") >= 2:
                tokens.append((_K_BREAK, start, end, 0))
        elif m.group("tag") is not None:
            tokens.append((_TAG_KINDS[m.group("tag")], start, end, 0))
        elif m.group("mem") is not None:
            tokens.append((_K_MEMORY, start, end, int(m.group("year"))))
        elif m.group("cite") is not None:
            value = int(m.group("num"))
            if value >= 1:
                tokens.append((_K_CITE, start, end, value))
        else:
            if _at_line_start(text, start):
                kind = _K_SECTION if text[start] == "S" else _K_TLDR
                tokens.append((kind, start, end, 0))
    return tokens
