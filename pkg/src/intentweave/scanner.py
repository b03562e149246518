"""Tokenizer for the inline intent-tag grammar, with backend selection.

Scanning raw report text for tag literals, citation markers, and section
markers is the one hot inner loop in corpus-scale runs, so it is
implemented twice: a compiled C extension (``_scan_c``, built from
Cython) and a pure-Python fallback (``_scan_py``). The compiled backend
is used when importable; set ``INTENTWEAVE_PURE_SCANNER=1`` to force the
fallback. Both backends emit identical token streams; the equivalence is
property-tested and ``benchmarks/bench_scanner.py`` compares throughput.

A token is a ``(kind, start, end, value)`` tuple of ints. Text between
tokens is implicit: consumers slice the source between token boundaries.

Token kinds:

========== ======================================================
K_BCIT     the literal ``<bcit>``
K_ECIT     the literal ``<ecit>``
K_BPIT     the literal ``<bpit>``
K_EPIT     the literal ``<epit>``
K_CITE     ``[n]`` or ``[Citation n]`` with n >= 1; value = n
K_MEMORY   ``[LLM MEMORY | year]``; value = year
K_SECTION  ``SECTION;`` as the first non-blank characters of a line
K_TLDR     ``TLDR;`` under the same line-start rule
K_BREAK    whitespace run containing at least two newlines
========== ======================================================
"""

from __future__ import annotations

import os

K_BCIT = 1
K_ECIT = 2
K_BPIT = 3
K_EPIT = 4
K_CITE = 5
K_MEMORY = 6
K_SECTION = 7
K_TLDR = 8
K_BREAK = 9

TAG_LITERALS = {
    K_BCIT: "<bcit>",
    K_ECIT: "<ecit>",
    K_BPIT: "<bpit>",
    K_EPIT: "<epit>",
}

OPEN_TAGS = (K_BCIT, K_BPIT)
CLOSE_TAGS = (K_ECIT, K_EPIT)

from . import _scan_py  # noqa: E402

_backends = {"python": _scan_py.tokenize}

if not os.environ.get("INTENTWEAVE_PURE_SCANNER"):
    try:
        from . import _scan_c

        _backends["c"] = _scan_c.tokenize
    except ImportError:
        pass

BACKEND = "c" if "c" in _backends else "python"
tokenize = _backends[BACKEND]


def available_backends() -> dict:
    """Name -> tokenize callable for every importable backend."""
    return dict(_backends)
