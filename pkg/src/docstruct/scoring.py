"""Line-format similarity scoring.

Two lines are compared column by column. Every column yields at most one
event (a cell of the 3x5 feature score map) and the score is the sum of
event weights, normalized by the number of active columns and the mean map
weight so it does not depend on line length or on the scale of the map.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "CharClass",
    "PositionRole",
    "Event",
    "ScoreEvent",
    "DEFAULT_MAP",
    "EVEN_MAP",
    "ROW_NAMES",
    "COLUMN_NAMES",
    "DegenerateMapError",
    "NoCommonFeaturesError",
    "classify_char",
    "position_roles",
    "classify_event",
    "event_counts",
    "event_counts_many",
    "score_from_counts",
    "compare_lines",
    "compare_one_to_many",
    "vary_element",
    "influential_elements",
    "adapt_map",
    "as_map",
    "load_score_map",
    "dump_score_map",
]


class CharClass(enum.IntEnum):
    ALPHA = 0
    NUMERIC = 1
    SYMBOL = 2
    SPACE = 3


class PositionRole(enum.IntEnum):
    BORDER = 0
    BODY = 1
    BLANK = 2


class Event(enum.IntEnum):
    """Column index of an event in the score map."""

    BODY_FULL = 0
    BODY_GROUP = 1
    BORDER_FULL = 2
    BORDER_GROUP = 3
    BORDER_NO_MATCH = 4


class ScoreEvent(NamedTuple):
    kind: Event | None
    row: CharClass | None = None

    @property
    def is_event(self) -> bool:
        return self.kind is not None


NO_EVENT = ScoreEvent(None, None)

ROW_NAMES = ("Alpha", "Numeric", "Symbol")
COLUMN_NAMES = (
    "BodyFullMatch",
    "BodyGroupMatch",
    "BorderFullMatch",
    "BorderGroupMatch",
    "BorderNoMatch",
)

DEFAULT_MAP = np.array(
    [[3, 3, 5, 5, 1], [3, 5, 7, 5, 1], [8, 6, 9, 5, 1]], dtype=float
)
DEFAULT_MAP.setflags(write=False)
EVEN_MAP = np.full((3, 5), 5.0)
EVEN_MAP.setflags(write=False)


class DegenerateMapError(ValueError):
    def __init__(self, msg="degenerate score map"):
        super().__init__(msg)


class NoCommonFeaturesError(ValueError):
    def __init__(self, msg="no common features"):
        super().__init__(msg)


def classify_char(c: str) -> CharClass:
    if c.isspace():
        return CharClass.SPACE
    if c.isalpha():
        return CharClass.ALPHA
    if c.isdecimal():
        return CharClass.NUMERIC
    return CharClass.SYMBOL


def position_roles(line: str) -> list[PositionRole]:
    """Border/Body/Blank role of every column of ``line``."""
    roles = []
    n = len(line)
    for i, c in enumerate(line):
        if c.isspace():
            roles.append(PositionRole.BLANK)
            continue
        left_edge = i == 0 or line[i - 1].isspace()
        right_edge = i == n - 1 or line[i + 1].isspace()
        roles.append(PositionRole.BORDER if left_edge or right_edge else PositionRole.BODY)
    return roles


def classify_event(ca: str, role_a: PositionRole, cb: str, role_b: PositionRole) -> ScoreEvent:
    """Map one column of a line pair to a score-map cell.

    A column where only one line has a character produces no event: the
    other line simply has nothing there to (mis)match.
    """
    if role_a == PositionRole.BLANK or role_b == PositionRole.BLANK:
        return NO_EVENT
    cls_a, cls_b = classify_char(ca), classify_char(cb)
    if cls_a != cls_b:
        if role_a == PositionRole.BORDER or role_b == PositionRole.BORDER:
            return ScoreEvent(Event.BORDER_NO_MATCH, cls_a)
        return NO_EVENT
    body = role_a == PositionRole.BODY and role_b == PositionRole.BODY
    if ca == cb:
        return ScoreEvent(Event.BODY_FULL if body else Event.BORDER_FULL, cls_a)
    return ScoreEvent(Event.BODY_GROUP if body else Event.BORDER_GROUP, cls_a)


class _Encoded(NamedTuple):
    codes: np.ndarray  # code points
    cls: np.ndarray  # CharClass values
    role: np.ndarray  # PositionRole values


@lru_cache(maxsize=65536)
def _encode(line: str) -> _Encoded:
    line = line.rstrip()
    codes = np.fromiter((ord(c) for c in line), dtype=np.int64, count=len(line))
    cls = np.fromiter((classify_char(c) for c in line), dtype=np.int8, count=len(line))
    role = np.fromiter(position_roles(line), dtype=np.int8, count=len(line))
    return _Encoded(codes, cls, role)


def _pad(enc: _Encoded, width: int) -> _Encoded:
    extra = width - len(enc.codes)
    if extra <= 0:
        return enc
    return _Encoded(
        np.concatenate([enc.codes, np.full(extra, 32, dtype=np.int64)]),
        np.concatenate([enc.cls, np.full(extra, CharClass.SPACE, dtype=np.int8)]),
        np.concatenate([enc.role, np.full(extra, PositionRole.BLANK, dtype=np.int8)]),
    )


def _stack(lines: Sequence[str], width: int) -> _Encoded:
    encs = [_pad(_encode(s), width) for s in lines]
    if not encs:
        z = np.zeros((0, width), dtype=np.int64)
        return _Encoded(z, z.astype(np.int8), z.astype(np.int8))
    return _Encoded(
        np.stack([e.codes[:width] for e in encs]),
        np.stack([e.cls[:width] for e in encs]),
        np.stack([e.role[:width] for e in encs]),
    )


def _event_cells(a: _Encoded, b: _Encoded) -> tuple[np.ndarray, np.ndarray]:
    """Flat map-cell index per column (-1 for no event) and active mask.

    ``a`` and ``b`` are broadcast-compatible padded encodings.
    """
    border, body = PositionRole.BORDER, PositionRole.BODY
    ns_a = a.cls != CharClass.SPACE
    ns_b = b.cls != CharClass.SPACE
    both = ns_a & ns_b
    same = both & (a.cls == b.cls)
    full = same & (a.codes == b.codes)
    body_pair = (a.role == body) & (b.role == body)
    any_border = (a.role == border) | (b.role == border)

    col = np.full(np.broadcast(a.cls, b.cls).shape, -1, dtype=np.int64)
    col = np.where(same & full & body_pair, Event.BODY_FULL, col)
    col = np.where(same & ~full & body_pair, Event.BODY_GROUP, col)
    col = np.where(same & full & ~body_pair, Event.BORDER_FULL, col)
    col = np.where(same & ~full & ~body_pair, Event.BORDER_GROUP, col)
    col = np.where(both & ~same & any_border, Event.BORDER_NO_MATCH, col)
    cells = np.where(col >= 0, a.cls.astype(np.int64) * 5 + col, -1)
    return cells, ns_a | ns_b


def event_counts(a: str, b: str) -> tuple[np.ndarray, int]:
    """3x5 matrix of event counts for a line pair and the active column count."""
    ea, eb = _encode(a), _encode(b)
    width = max(len(ea.codes), len(eb.codes))
    cells, active = _event_cells(_pad(ea, width), _pad(eb, width))
    counts = np.bincount(cells[cells >= 0], minlength=15).reshape(3, 5)
    return counts, int(active.sum())


def event_counts_many(line: str, others: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    """Event counts of ``line`` against each of ``others``.

    Returns an (n, 3, 5) count array and an (n,) active-column array.
    """
    n = len(others)
    if n == 0:
        return np.zeros((0, 3, 5), dtype=np.int64), np.zeros(0, dtype=np.int64)
    ea = _encode(line)
    width = max([len(ea.codes)] + [len(_encode(s).codes) for s in others])
    if width == 0:
        return np.zeros((n, 3, 5), dtype=np.int64), np.zeros(n, dtype=np.int64)
    pa = _pad(ea, width)
    stacked = _stack(others, width)
    cells, active = _event_cells(
        _Encoded(pa.codes[None, :], pa.cls[None, :], pa.role[None, :]), stacked
    )
    offs = (np.arange(n)[:, None] * 15 + cells)[cells >= 0]
    counts = np.bincount(offs, minlength=n * 15).reshape(n, 3, 5)
    return counts, active.sum(axis=1)


def as_map(m) -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.shape != (3, 5):
        raise ValueError(f"score map must be 3x5, got shape {arr.shape}")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError("score map elements must be finite and non-negative")
    return arr


def score_from_counts(counts, active, m) -> np.ndarray | float:
    """Normalized score(s) from event counts.

    Written as 1500*S/(N*sum(m)) rather than 100*S/(N*mean(m)) so that
    integer-valued maps give exactly scale-invariant results.
    """
    m = as_map(m)
    total = float(m.sum())
    if total <= 0:
        raise DegenerateMapError()
    counts = np.asarray(counts)
    weighted = (counts * m).sum(axis=(-2, -1))
    active = np.asarray(active, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        score = np.where(active > 0, 1500.0 * weighted / (active * total), 0.0)
    if score.ndim == 0:
        return float(score)
    return score


def compare_lines(a: str, b: str, m=DEFAULT_MAP) -> float:
    """Formatting similarity of two lines under map ``m``.

    >>> compare_lines("AB 12", "AB 12", EVEN_MAP)
    100.0
    """
    counts, active = event_counts(a, b)
    return score_from_counts(counts, active, m)


def compare_one_to_many(line: str, others: Sequence[str], m=DEFAULT_MAP) -> np.ndarray:
    counts, active = event_counts_many(line, others)
    return np.asarray(score_from_counts(counts, active, m), dtype=float).reshape(-1)


def vary_element(a: str, b: str, m, row: int, col: int, values=range(1, 10)) -> list[float]:
    m = as_map(m)
    if not (0 <= row < 3 and 0 <= col < 5):
        raise IndexError(f"no map element ({row}, {col})")
    counts, active = event_counts(a, b)
    out = []
    for v in values:
        mv = m.copy()
        mv[row, col] = v
        out.append(score_from_counts(counts, active, mv))
    return out


def influential_elements(a: str, b: str) -> np.ndarray:
    """Boolean 3x5 mask of map elements whose weight is sampled by the pair.

    An element with no event in the pair leaves the weighted event sum
    unchanged under any variation; only the normalizing mean moves.
    """
    counts, _ = event_counts(a, b)
    return counts > 0


def adapt_map(a: str, b: str, m=DEFAULT_MAP) -> np.ndarray:
    """Copy of ``m`` with the elements not exercised by the pair set to zero."""
    m = as_map(m)
    mask = influential_elements(a, b)
    if not mask.any():
        raise NoCommonFeaturesError()
    out = np.where(mask, m, 0.0)
    if out.sum() <= 0:
        raise DegenerateMapError()
    return out


# Score-map file: three non-empty, non-comment lines (Alpha, Numeric, Symbol),
# five numbers each separated by whitespace or commas. '#' starts a comment.


def load_score_map(path) -> np.ndarray:
    rows = []
    for raw in Path(path).read_text().splitlines():
        text = raw.split("#", 1)[0].replace(",", " ").strip()
        if text:
            rows.append([float(x) for x in text.split()])
    if len(rows) != 3 or any(len(r) != 5 for r in rows):
        raise ValueError(f"{path}: expected 3 rows of 5 numbers")
    m = as_map(rows)
    if m.sum() <= 0:
        raise DegenerateMapError()
    return m


def dump_score_map(m, path=None) -> str:
    m = as_map(m)
    lines = ["# rows: Alpha Numeric Symbol", "# cols: " + " ".join(COLUMN_NAMES)]
    for r in m:
        lines.append(" ".join(f"{v:g}" for v in r))
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
