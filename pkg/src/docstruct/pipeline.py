"""End-to-end analysis: read a document, detect templates, assign every line,
build the hierarchy and (optionally) extract records. Also the run
configuration and atomic artifact writing used by the CLI."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .extraction import Extraction, ExtractionPlan, build_plan, extract
from .hierarchy import HierarchyResult, build_hierarchy
from .scoring import DEFAULT_MAP, load_score_map
from .templates import RoleRules, TemplateSet, detect_templates, match_line

__all__ = [
    "EmptyDocumentError",
    "ConfigError",
    "RunConfig",
    "Analysis",
    "read_document",
    "split_lines",
    "analyze",
    "run_extraction",
    "series_csv",
    "templates_json",
    "write_atomic",
]


class EmptyDocumentError(ValueError):
    def __init__(self, msg="empty document"):
        super().__init__(msg)


class ConfigError(ValueError):
    pass


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


@dataclass(frozen=True)
class RunConfig:
    sample_lines: int = 200
    min_similarity: float = 50.0
    adaptive: bool = True
    score_map: str | None = None
    decor_symbol_fraction: float = 0.8
    heading_digit_fraction: float = 0.05
    out_dir: str = "."
    format: str = "csv"
    emit_series: bool = False
    emit_svg: bool = False

    def __post_init__(self):
        if self.sample_lines < 1:
            raise ConfigError("sample_lines must be >= 1")
        if self.min_similarity < 0:
            raise ConfigError("min_similarity must be >= 0")
        if self.format not in ("csv", "jsonl"):
            raise ConfigError(f"unknown format {self.format!r} (csv or jsonl)")

    @property
    def role_rules(self) -> RoleRules:
        return RoleRules(self.decor_symbol_fraction, self.heading_digit_fraction)

    def score_matrix(self) -> np.ndarray:
        if self.score_map is None:
            return np.array(DEFAULT_MAP)
        return load_score_map(self.score_map)

    def with_overrides(self, **kw) -> RunConfig:
        """Copy with every non-None keyword applied (flags beat the file)."""
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    @classmethod
    def from_file(cls, path) -> RunConfig:
        """Parse ``key = value`` lines; ``#`` starts a comment.

        Keys are the field names of this class (dashes allowed in place of
        underscores).
        """
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{n}: expected key = value")
            key, val = (s.strip() for s in text.split("=", 1))
            key = key.replace("-", "_")
            if key not in types:
                raise ConfigError(f"{path}:{n}: unknown key {key!r}")
            values[key] = _convert(types[key], val, f"{path}:{n}")
        return cls(**values)


def _convert(typ: str, val: str, where: str):
    try:
        if typ == "int":
            return int(val)
        if typ == "float":
            return float(val)
        if typ == "bool":
            return _BOOL[val.lower()]
    except (ValueError, KeyError):
        raise ConfigError(f"{where}: bad {typ} value {val!r}") from None
    if typ.startswith("str | None") and val.lower() in ("", "none"):
        return None
    return val


def split_lines(text: str) -> list[str]:
    """LF or CRLF line breaks, tabs expanded to 8-column stops, right-stripped."""
    parts = text.split("\n")
    if parts and parts[-1] == "":
        parts.pop()
    return [p.rstrip("\r").expandtabs(8).rstrip() for p in parts]


def read_document(path) -> list[str]:
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        # single-byte legacy file: one column per byte
        text = data.decode("latin-1")
    return split_lines(text)


@dataclass
class Analysis:
    lines: list[str]
    templates: TemplateSet
    template_ids: list[int | None]  # per line; None = blank or unmatched
    hierarchy: HierarchyResult
    detail_ids: list[int]
    unmatched: int = 0

    @property
    def series(self) -> list[tuple[int, int]]:
        return [(i + 1, t) for i, t in enumerate(self.template_ids) if t is not None]

    @property
    def dss(self) -> str:
        return self.hierarchy.dss()


def _detail_ids(ts: TemplateSet) -> list[int]:
    ids = ts.ids_with_role("detail")
    if ids:
        return ids
    # every maximal-count template was claimed by an earlier role rule
    top = max(t.line_count for t in ts)
    return [t.id for t in ts if t.line_count == top]


def analyze(lines: Sequence[str], config: RunConfig = RunConfig()) -> Analysis:
    lines = [s.rstrip() for s in lines]
    if not any(lines):
        raise EmptyDocumentError()
    m = config.score_matrix()
    ts, sample_series = detect_templates(
        lines, m,
        sample_size=config.sample_lines,
        min_similarity=config.min_similarity,
        adaptive=config.adaptive,
        role_rules=config.role_rules,
    )
    ids: list[int | None] = [None] * len(lines)
    for ln, tid in sample_series:
        ids[ln - 1] = tid
    unmatched = 0
    for i in range(min(config.sample_lines, len(lines)), len(lines)):
        if lines[i]:
            ids[i] = match_line(lines[i], ts)
            unmatched += ids[i] is None
    detail = _detail_ids(ts)
    h = build_hierarchy([t for t in ids if t is not None], detail)
    return Analysis(lines, ts, ids, h, detail, unmatched)


def run_extraction(analysis: Analysis) -> tuple[ExtractionPlan, Extraction]:
    plan = build_plan(analysis.templates, analysis.hierarchy)
    ex = extract(analysis.lines, analysis.templates, plan, analysis.template_ids)
    return plan, ex


def series_csv(series: Sequence[tuple[int, int]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["line", "template_id"])
    w.writerows(series)
    return buf.getvalue()


def templates_json(analysis: Analysis, plan: ExtractionPlan | None = None) -> str:
    doc = analysis.templates.to_dict()
    doc["detail_ids"] = list(analysis.detail_ids)
    doc["structure"] = analysis.hierarchy.to_dict()
    if plan is not None:
        doc["extraction_plan"] = plan.to_dict()
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text: str) -> Path:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path
