"""Helpers for placing text at fixed 1-based columns."""

from __future__ import annotations


def place(fields) -> str:
    """Build a line from ``(column, text)`` or ``(column, text, 'right')`` items.

    Columns are 1-based. With ``'right'`` the column is the last character
    of the text instead of the first. Overlapping fields raise ValueError.
    """
    buf: list[str] = []
    for item in fields:
        col, text = item[0], item[1]
        if text is None or text == "":
            continue
        if len(item) > 2 and item[2] == "right":
            col = col - len(text) + 1
        start = col - 1
        if start < 0:
            raise ValueError(f"field {text!r} starts before column 1")
        if len(buf) < start + len(text):
            buf.extend(" " * (start + len(text) - len(buf)))
        if any(ch != " " for ch in buf[start : start + len(text)]):
            raise ValueError(f"field {text!r} overlaps at column {col}")
        buf[start : start + len(text)] = text
    return "".join(buf).rstrip()
