"""Brute-force reference implementations used to cross-check the library.

Nothing here imports the scoring or hierarchy modules; the point is an
independent second opinion written in the most literal way possible.
"""

from __future__ import annotations

_ALPHA, _NUMERIC, _SYMBOL = 0, 1, 2
_BODY_FULL, _BODY_GROUP, _BORDER_FULL, _BORDER_GROUP, _BORDER_NO_MATCH = range(5)


def _cls(ch):
    if ch.isalpha():
        return _ALPHA
    if ch.isdecimal():
        return _NUMERIC
    return _SYMBOL


def _is_border(text, i):
    before = text[i - 1] if i > 0 else " "
    after = text[i + 1] if i + 1 < len(text) else " "
    return before.isspace() or after.isspace()


def oracle_score(a: str, b: str, m) -> float:
    """Same contract as compare_lines, one column at a time."""
    a = a.rstrip()
    b = b.rstrip()
    weights = [[float(m[r][c]) for c in range(5)] for r in range(3)]
    total_weight = 0.0
    for r in range(3):
        for c in range(5):
            if weights[r][c] < 0:
                raise ValueError("negative weight")
            total_weight += weights[r][c]
    if total_weight == 0:
        raise ValueError("degenerate score map")

    width = max(len(a), len(b))
    a = a.ljust(width)
    b = b.ljust(width)
    weight_sum = 0.0
    active = 0
    for i in range(width):
        ca, cb = a[i], b[i]
        if ca.isspace() and cb.isspace():
            continue
        active += 1
        if ca.isspace() or cb.isspace():
            continue
        border_a = _is_border(a, i)
        border_b = _is_border(b, i)
        if _cls(ca) != _cls(cb):
            if border_a or border_b:
                weight_sum += weights[_cls(ca)][_BORDER_NO_MATCH]
            continue
        if not border_a and not border_b:
            col = _BODY_FULL if ca == cb else _BODY_GROUP
        else:
            col = _BORDER_FULL if ca == cb else _BORDER_GROUP
        weight_sum += weights[_cls(ca)][col]
    if active == 0:
        return 0.0
    return 1500.0 * weight_sum / (active * total_weight)


def oracle_repeats(series) -> list[tuple[tuple, int, int]]:
    """Every maximal run of >= 2 adjacent copies of a primitive motif.

    Returns ``(motif, start, run_length)`` triples sorted by start, then
    motif length. A run is maximal when it cannot be extended by one more
    copy on either side.
    """
    s = list(series)
    n = len(s)
    found = []
    for p in range(1, n // 2 + 1):
        for i in range(n - 2 * p + 1):
            motif = tuple(s[i : i + p])
            primitive = True
            for q in range(1, p):
                if p % q == 0 and motif == motif[:q] * (p // q):
                    primitive = False
            if not primitive:
                continue
            if i >= p and tuple(s[i - p : i]) == motif:
                continue
            k = 1
            while tuple(s[i + k * p : i + (k + 1) * p]) == motif:
                k += 1
            if k >= 2:
                found.append((motif, i, k))
    found.sort(key=lambda t: (t[1], len(t[0])))
    return found
