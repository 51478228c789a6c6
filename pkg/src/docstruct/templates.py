"""Template recognition: cluster sample lines by formatting.

Each unmarked line in the sample is compared with every other unmarked
line. The recognition threshold sits in the middle of the widest gap of the
sorted distinct scores; the lines above it join the new template.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .scoring import (
    DEFAULT_MAP,
    CharClass,
    as_map,
    classify_char,
    compare_lines,
    event_counts_many,
    score_from_counts,
)

__all__ = [
    "BLANK_TEMPLATE",
    "NoGapError",
    "RoleRules",
    "MaskColumn",
    "Template",
    "TemplateSet",
    "gap_threshold",
    "build_field_layout",
    "build_mask",
    "classify_role",
    "detect_templates",
    "match_line",
]

BLANK_TEMPLATE = -1
ROLES = ("body", "heading", "decor", "detail")


class NoGapError(ValueError):
    def __init__(self, msg="no gap"):
        super().__init__(msg)


@dataclass(frozen=True)
class RoleRules:
    decor_symbol_fraction: float = 0.8
    heading_digit_fraction: float = 0.05


@dataclass(frozen=True)
class MaskColumn:
    literal: str | None
    classes: frozenset = frozenset()
    optional: bool = False

    def describe(self) -> str:
        """Compact text form: the literal, or class letters A/N/S; '?' marks optional."""
        if self.literal is not None:
            body = self.literal
        else:
            body = "[" + "".join("ANS"[c] for c in sorted(self.classes)) + "]"
        return body + ("?" if self.optional else "")


@dataclass
class Template:
    id: int
    reference_line: int
    members: list[int]
    threshold: float | None
    adapted_map: np.ndarray
    reference_text: str = ""
    field_layout: list[tuple[int, int]] = field(default_factory=list)
    key_name: str = ""
    mask: list[MaskColumn] = field(default_factory=list)
    role: str = "body"

    @property
    def line_count(self) -> int:
        return len(self.members)

    @property
    def field_count(self) -> int:
        return len(self.field_layout)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "key_name": self.key_name,
            "role": self.role,
            "fields": [{"start": a, "end": b} for a, b in self.field_layout],
            "line_count": self.line_count,
            "threshold": None if self.threshold is None else round(float(self.threshold), 6),
            "reference_line": self.reference_line + 1,
            "reference_text": self.reference_text,
            "adapted_map": [[float(v) for v in row] for row in self.adapted_map],
            "mask": [c.describe() for c in self.mask],
        }


@dataclass
class TemplateSet:
    templates: list[Template]
    score_map: np.ndarray
    sample_size: int
    min_similarity: float
    adaptive: bool

    def __len__(self):
        return len(self.templates)

    def __iter__(self):
        return iter(self.templates)

    def __getitem__(self, tid: int) -> Template:
        return self.templates[tid]

    def ids_with_role(self, role: str) -> list[int]:
        return [t.id for t in self.templates if t.role == role]

    def to_dict(self) -> dict:
        return {
            "sample_size": self.sample_size,
            "min_similarity": self.min_similarity,
            "adaptive": self.adaptive,
            "score_map": [[float(v) for v in row] for row in self.score_map],
            "templates": [t.to_dict() for t in self.templates],
        }


def gap_threshold(scores: Sequence[float]) -> float:
    """Midpoint of the widest gap between consecutive distinct scores.

    Equal gaps resolve to the highest-valued one.

    >>> gap_threshold([5, 90])
    47.5
    """
    vals = np.unique(np.asarray(scores, dtype=float))
    if len(vals) < 2:
        raise NoGapError()
    gaps = np.diff(vals)
    widest = gaps.max()
    k = int(np.flatnonzero(gaps == widest)[-1])
    return float((vals[k] + vals[k + 1]) / 2)


def _column_chars(members: Sequence[str]) -> list[list[str]]:
    texts = [m.rstrip() for m in members]
    width = max((len(t) for t in texts), default=0)
    return [[t[i] if i < len(t) else " " for t in texts] for i in range(width)]


def build_field_layout(members: Sequence[str]) -> tuple[list[tuple[int, int]], str]:
    """Field spans (1-based, inclusive) and key name for a group of lines.

    A column separates fields only when it is blank in every member.
    """
    if not members:
        raise ValueError("need at least one member line")
    spans = []
    start = None
    cols = _column_chars(members)
    for i, chars in enumerate(cols):
        sep = all(c.isspace() for c in chars)
        if not sep and start is None:
            start = i + 1
        elif sep and start is not None:
            spans.append((start, i))
            start = None
    if start is not None:
        spans.append((start, len(cols)))
    return spans, "-".join(str(a) for a, _ in spans)


def build_mask(members: Sequence[str]) -> list[MaskColumn]:
    if not members:
        raise ValueError("need at least one member line")
    mask = []
    for chars in _column_chars(members):
        present = [c for c in chars if not c.isspace()]
        optional = 0 < len(present) < len(chars)
        distinct = set(present)
        if not present:
            mask.append(MaskColumn(" "))
        elif len(distinct) == 1:
            mask.append(MaskColumn(present[0], frozenset({classify_char(present[0])}), optional))
        else:
            classes = frozenset(classify_char(c) for c in distinct)
            mask.append(MaskColumn(None, classes, optional))
    return mask


def classify_role(members: Sequence[str], max_count: int, rules: RoleRules = RoleRules()) -> str:
    """Role of a template from its member lines; first matching rule wins."""
    texts = [m.rstrip() for m in members]
    chars = [c for t in texts for c in t if not c.isspace()]
    n = len(chars)
    if n:
        symbols = sum(classify_char(c) == CharClass.SYMBOL for c in chars)
        if symbols / n >= rules.decor_symbol_fraction:
            return "decor"
        digits = sum(classify_char(c) == CharClass.NUMERIC for c in chars)
        if len(set(texts)) == 1 and digits / n < rules.heading_digit_fraction:
            return "heading"
    if len(members) == max_count:
        return "detail"
    return "body"


def detect_templates(
    lines: Sequence[str],
    m=DEFAULT_MAP,
    sample_size: int = 200,
    min_similarity: float = 50.0,
    adaptive: bool = True,
    role_rules: RoleRules = RoleRules(),
) -> tuple[TemplateSet, list[tuple[int, int]]]:
    """Cluster the first ``sample_size`` lines into templates.

    Returns the template set and the series of ``(line_number, template_id)``
    pairs (1-based line numbers) covering every non-blank sample line.
    """
    m = as_map(m)
    if sample_size < 1:
        raise ValueError("sample_size must be >= 1")
    sample = [s.rstrip() for s in lines[:sample_size]]
    if not any(sample):
        raise ValueError("empty document")

    assigned = [BLANK_TEMPLATE if not s else None for s in sample]
    templates: list[Template] = []
    for i, line in enumerate(sample):
        if assigned[i] is not None:
            continue
        others = [j for j in range(len(sample)) if assigned[j] is None and j != i]
        tmap = m
        threshold = None
        members = [i]
        if others:
            counts, active = event_counts_many(line, [sample[j] for j in others])
            scores = score_from_counts(counts, active, m)
            if adaptive:
                best = int(np.argmax(scores))
                if scores[best] >= min_similarity:
                    tmap = np.where(counts[best] > 0, m, 0.0)
                    scores = score_from_counts(counts, active, tmap)
            # 0 stands for "nothing in common" and anchors the low end, so a
            # handful of uniformly similar candidates is still separable.
            distinct = np.unique(np.append(scores, 0.0))
            if len(distinct) >= 2:
                cut = max(gap_threshold(distinct), min_similarity)
                joined = [j for j, s in zip(others, scores) if s >= cut]
                if joined:
                    members.extend(joined)
                    threshold = cut
        tid = len(templates)
        for j in members:
            assigned[j] = tid
        templates.append(
            Template(
                id=tid,
                reference_line=i,
                members=sorted(members),
                threshold=threshold,
                adapted_map=np.array(tmap, dtype=float),
                reference_text=line,
            )
        )

    max_count = max(len(t.members) for t in templates)
    for t in templates:
        texts = [sample[j] for j in t.members]
        t.field_layout, t.key_name = build_field_layout(texts)
        t.mask = build_mask(texts)
        t.role = classify_role(texts, max_count, role_rules)

    ts = TemplateSet(templates, m, sample_size, min_similarity, adaptive)
    series = [(i + 1, tid) for i, tid in enumerate(assigned) if tid != BLANK_TEMPLATE]
    return ts, series


def match_line(line: str, ts: TemplateSet) -> int | None:
    """Template id for a line outside the sample, or None if nothing fits."""
    line = line.rstrip()
    if not line:
        return None
    best_id, best_score = None, -np.inf
    for t in ts:
        if t.threshold is None:
            if line == t.reference_text and best_id is None:
                best_id, best_score = t.id, np.inf
            continue
        s = compare_lines(t.reference_text, line, t.adapted_map)
        if s >= t.threshold and s > best_score:
            best_id, best_score = t.id, s
    return best_id
