# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scanner backend.

Token-for-token identical to ``_scan_py``; see ``scanner.py`` for the
token contract. One left-to-right pass, no allocation besides the
output list.
"""

cdef int K_BCIT = 1
cdef int K_ECIT = 2
cdef int K_BPIT = 3
cdef int K_EPIT = 4
cdef int K_CITE = 5
cdef int K_MEMORY = 6
cdef int K_SECTION = 7
cdef int K_TLDR = 8
cdef int K_BREAK = 9


cdef inline bint _starts(str text, Py_ssize_t i, Py_ssize_t n, str lit):
    cdef Py_ssize_t m = len(lit)
    cdef Py_ssize_t k
    if i + m > n:
        return False
    for k in range(m):
        if text[i + k] != lit[k]:
            return False
    return True


cdef inline bint _starts_ci(str text, Py_ssize_t i, Py_ssize_t n, str lower_lit):
    # lower_lit must be lowercase ASCII letters/spaces.
    cdef Py_ssize_t m = len(lower_lit)
    cdef Py_ssize_t k
    cdef unsigned long c, l
    if i + m > n:
        return False
    for k in range(m):
        c = <unsigned long> (<Py_UCS4> text[i + k])
        l = <unsigned long> (<Py_UCS4> lower_lit[k])
        if c != l and not (97 <= l <= 122 and c == l - 32):
            return False
    return True


cdef inline Py_ssize_t _scan_digits(str text, Py_ssize_t i, Py_ssize_t n):
    cdef Py_ssize_t j = i
    while j < n and u'0' <= text[j] <= u'9':
        j += 1
    return j


def tokenize(str text):
    cdef Py_ssize_t i = 0, j, k, n = len(text)
    cdef Py_UCS4 c
    cdef bint line_start = True
    cdef int newlines
    cdef list tokens = []
    cdef object value

    while i < n:
        c = text[i]

        if c == u' ' or c == u'\t' or c == u'\r' or c == u'\n':
            j = i
            newlines = 0
            while j < n:
                c = text[j]
                if c == u'\n':
                    newlines += 1
                    line_start = True
                elif c == u'\r':
                    line_start = False
                elif c == u' ' or c == u'\t':
                    pass
                else:
                    break
                j += 1
            if newlines >= 2:
                tokens.append((K_BREAK, i, j, 0))
            i = j
            continue

        if c == u'<':
            if _starts(text, i, n, u"<bcit>"):
                tokens.append((K_BCIT, i, i + 6, 0))
                i += 6
                line_start = False
                continue
            if _starts(text, i, n, u"<ecit>"):
                tokens.append((K_ECIT, i, i + 6, 0))
                i += 6
                line_start = False
                continue
            if _starts(text, i, n, u"<bpit>"):
                tokens.append((K_BPIT, i, i + 6, 0))
                i += 6
                line_start = False
                continue
            if _starts(text, i, n, u"<epit>"):
                tokens.append((K_EPIT, i, i + 6, 0))
                i += 6
                line_start = False
                continue

        elif c == u'[':
            # [LLM MEMORY | year]
            if _starts(text, i + 1, n, u"LLM MEMORY | "):
                k = i + 14
                j = _scan_digits(text, k, n)
                if j > k and j < n and text[j] == u']':
                    value = int(text[k:j])
                    tokens.append((K_MEMORY, i, j + 1, value))
                    i = j + 1
                    line_start = False
                    continue
            # [Citation n] (word matched case-insensitively)
            if _starts_ci(text, i + 1, n, u"citation "):
                k = i + 10
                j = _scan_digits(text, k, n)
                if j > k and j < n and text[j] == u']':
                    value = int(text[k:j])
                    if value >= 1:
                        tokens.append((K_CITE, i, j + 1, value))
                        i = j + 1
                        line_start = False
                        continue
            # [n]
            j = _scan_digits(text, i + 1, n)
            if j > i + 1 and j < n and text[j] == u']':
                value = int(text[i + 1:j])
                if value >= 1:
                    tokens.append((K_CITE, i, j + 1, value))
                    i = j + 1
                    line_start = False
                    continue

        elif line_start and c == u'S':
            if _starts(text, i, n, u"SECTION;"):
                tokens.append((K_SECTION, i, i + 8, 0))
                i += 8
                line_start = False
                continue

        elif line_start and c == u'T':
            if _starts(text, i, n, u"TLDR;"):
                tokens.append((K_TLDR, i, i + 5, 0))
                i += 5
                line_start = False
                continue

        line_start = False
        i += 1

    return tokens
