"""Record extraction driven by the discovered templates and hierarchy.

Detail-pattern occurrences become records. Header templates of enclosing
levels contribute their field values as soon as they are read; footer
templates are only seen after the group's records, so their values are
attached back to every record of the group. Body templates of secondary
structures (page headers and the like) contribute their latest values.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Sequence

from .hierarchy import HierarchyResult, Pattern
from .templates import TemplateSet, match_line

__all__ = [
    "Binding",
    "ExtractionPlan",
    "Record",
    "Extraction",
    "NoDetailLevelError",
    "build_plan",
    "extract",
    "records_to_csv",
    "records_to_jsonl",
]


class NoDetailLevelError(ValueError):
    def __init__(self, msg="no detail level"):
        super().__init__(msg)


@dataclass(frozen=True)
class Binding:
    template_id: int
    level: int  # 0 = detail, >= 1 = enclosing group, -1 = page
    side: str  # "D", "H", "F" or "P"
    fields: tuple[tuple[int, int], ...]

    @property
    def columns(self) -> list[str]:
        if self.side == "D":
            prefix = "D"
        elif self.side == "P":
            prefix = "P"
        else:
            prefix = f"L{self.level}_{self.side}"
        return [f"{prefix}_T{self.template_id}_C{a}" for a, _ in self.fields]

    def values(self, line: str) -> list[str]:
        return [line[i:j].strip() for i, j in self.slices(line)]

    def slices(self, line: str) -> list[tuple[int, int]]:
        """0-based half-open slice per field, widened to word boundaries.

        The spans come from the sample, so a wider value later on (page 10
        after pages 1-9) would otherwise be cut.
        """
        out = []
        for a, b in self.fields:
            i, j = a - 1, min(b, len(line))
            if i >= len(line):
                out.append((i, i))
                continue
            while i > 0 and not line[i].isspace() and not line[i - 1].isspace():
                i -= 1
            while j < len(line) and not line[j - 1].isspace() and not line[j].isspace():
                j += 1
            out.append((i, j))
        return out


@dataclass
class ExtractionPlan:
    detail: list[Binding]
    headers: dict[int, list[Binding]]  # level -> bindings, in pattern order
    footers: dict[int, list[Binding]]
    page: list[Binding]
    depth: int  # number of levels above the detail pattern

    @property
    def detail_ids(self) -> list[int]:
        return [b.template_id for b in self.detail]

    @property
    def columns(self) -> list[str]:
        cols: list[str] = []
        for b in self.page:
            cols.extend(b.columns)
        for lvl in range(self.depth, 0, -1):
            for b in self.headers.get(lvl, []):
                cols.extend(b.columns)
        for b in self.detail:
            cols.extend(b.columns)
        for lvl in range(1, self.depth + 1):
            for b in self.footers.get(lvl, []):
                cols.extend(b.columns)
        return cols

    def to_dict(self) -> dict:
        def dump(bs):
            return [{"template_id": b.template_id, "columns": b.columns} for b in bs]

        return {
            "detail": dump(self.detail),
            "headers": {str(k): dump(v) for k, v in sorted(self.headers.items())},
            "footers": {str(k): dump(v) for k, v in sorted(self.footers.items())},
            "page": dump(self.page),
            "columns": self.columns,
        }


@dataclass
class Record:
    values: dict[str, str]
    sources: dict[str, int]  # column -> 1-based line number of its value
    lines: list[int]  # detail lines of this record
    groups: tuple[int, ...]  # open group index per level, outermost last
    complete: bool = True

    def row(self, columns: Sequence[str]) -> list[str]:
        return [self.values.get(c, "") for c in columns]


@dataclass
class Extraction:
    records: list[Record]
    columns: list[str]
    skipped: int = 0
    incomplete: int = 0

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]


def _binding(ts: TemplateSet, tid: int, level: int, side: str) -> Binding:
    return Binding(tid, level, side, tuple(ts[tid].field_layout))


def _find_detail_structure(ts: TemplateSet, h: HierarchyResult) -> Pattern:
    detail = set(ts.ids_with_role("detail"))
    for s in h.structures:
        if detail & set(s.levels()[0].header):
            return s
    raise NoDetailLevelError()


def build_plan(ts: TemplateSet, h: HierarchyResult) -> ExtractionPlan:
    main = _find_detail_structure(ts, h)
    levels = main.levels()
    detail = [_binding(ts, t, 0, "D") for t in levels[0].header]
    headers = {}
    footers = {}
    for lvl, p in enumerate(levels[1:], start=1):
        headers[lvl] = [_binding(ts, t, lvl, "H") for t in p.header]
        footers[lvl] = [_binding(ts, t, lvl, "F") for t in p.footer]
    page = []
    seen = set()
    for s in h.structures:
        if s is main:
            continue
        for t in s.template_ids():
            if t not in seen and ts[t].role == "body":
                page.append(_binding(ts, t, -1, "P"))
                seen.add(t)
    page.sort(key=lambda b: b.template_id)
    return ExtractionPlan(detail, headers, footers, page, len(levels) - 1)


class _State:
    """Mutable bookkeeping for one extraction pass."""

    def __init__(self, plan: ExtractionPlan):
        self.plan = plan
        self.depth = plan.depth
        self.records: list[Record] = []
        self.incomplete = 0
        self.page_vals: dict[str, tuple[str, int]] = {}
        # per level: current header values, records of the open group,
        # templates seen in the open group
        self.head_vals = {lvl: {} for lvl in range(1, self.depth + 1)}
        self.members = {lvl: [] for lvl in range(1, self.depth + 1)}
        self.seen = {lvl: set() for lvl in range(1, self.depth + 1)}
        self.group_no = {lvl: 0 for lvl in range(1, self.depth + 1)}
        self.fresh = {lvl: True for lvl in range(1, self.depth + 1)}
        self.partial: Record | None = None
        self.next_pos = 0

    # detail -----------------------------------------------------------
    def _start(self):
        vals: dict[str, str] = {}
        srcs: dict[str, int] = {}
        for col, (v, ln) in self.page_vals.items():
            vals[col], srcs[col] = v, ln
        for lvl in range(1, self.depth + 1):
            for col, (v, ln) in self.head_vals[lvl].items():
                vals[col], srcs[col] = v, ln
        for lvl in range(1, self.depth + 1):
            if self.fresh[lvl]:
                self.group_no[lvl] += 1
                self.fresh[lvl] = False
        groups = tuple(self.group_no[lvl] for lvl in range(1, self.depth + 1))
        self.partial = Record(vals, srcs, [], groups)
        self.next_pos = 0

    def finish_partial(self):
        rec = self.partial
        if rec is None:
            return
        rec.complete = len(rec.lines) == len(self.plan.detail)
        if not rec.complete:
            self.incomplete += 1
        self.records.append(rec)
        for lvl in range(1, self.depth + 1):
            self.members[lvl].append(rec)
        self.partial = None
        self.next_pos = 0

    def detail_line(self, pos: int, line: str, ln: int):
        if self.partial is not None and pos != self.next_pos:
            self.finish_partial()
        if self.partial is None:
            self._start()
            self.next_pos = pos
        b = self.plan.detail[pos]
        rec = self.partial
        for col, v in zip(b.columns, b.values(line)):
            rec.values[col] = v
            rec.sources[col] = ln
        rec.lines.append(ln)
        self.next_pos = pos + 1
        if self.next_pos == len(self.plan.detail):
            self.finish_partial()

    # groups -----------------------------------------------------------
    def _close(self, upto: int):
        for lvl in range(1, upto + 1):
            self.members[lvl] = []
            self.seen[lvl] = set()
            self.head_vals[lvl] = {}
            self.fresh[lvl] = True

    def header_line(self, b: Binding, line: str, ln: int):
        self.finish_partial()
        lvl = b.level
        seen = self.seen[lvl]
        # a header template seen twice, or after records or a footer, opens
        # the next group at this level
        if not seen or ("H", b.template_id) in seen or self.members[lvl] or any(
            k[0] == "F" for k in seen
        ):
            self._close(lvl)
        seen.add(("H", b.template_id))
        for col, v in zip(b.columns, b.values(line)):
            self.head_vals[lvl][col] = (v, ln)

    def footer_line(self, b: Binding, line: str, ln: int):
        self.finish_partial()
        lvl = b.level
        vals = list(zip(b.columns, b.values(line)))
        for rec in self.members[lvl]:
            for col, v in vals:
                rec.values[col] = v
                rec.sources[col] = ln
        self.seen[lvl].add(("F", b.template_id))
        if b.template_id == self.plan.footers[lvl][-1].template_id:
            self._close(lvl)
        else:
            self._close(lvl - 1)

    def page_line(self, b: Binding, line: str, ln: int):
        for col, v in zip(b.columns, b.values(line)):
            self.page_vals[col] = (v, ln)


def extract(
    lines: Sequence[str],
    ts: TemplateSet,
    plan: ExtractionPlan,
    template_ids: Sequence[int | None] | None = None,
) -> Extraction:
    """Run ``plan`` over ``lines``.

    ``template_ids`` may carry a precomputed template id per line (None for
    blank or unmatched lines); otherwise every line goes through match_line.
    """
    detail_pos = {b.template_id: i for i, b in enumerate(plan.detail)}
    header_of = {b.template_id: b for bs in plan.headers.values() for b in bs}
    footer_of = {b.template_id: b for bs in plan.footers.values() for b in bs}
    page_of = {b.template_id: b for b in plan.page}

    st = _State(plan)
    skipped = 0
    for i, raw in enumerate(lines):
        line = raw.rstrip()
        ln = i + 1
        if template_ids is not None:
            tid = template_ids[i]
        else:
            tid = match_line(line, ts) if line else None
        if tid is None:
            if line:
                skipped += 1
            continue
        if tid in detail_pos:
            st.detail_line(detail_pos[tid], line, ln)
        elif tid in header_of:
            st.header_line(header_of[tid], line, ln)
        elif tid in footer_of:
            st.footer_line(footer_of[tid], line, ln)
        elif tid in page_of:
            st.page_line(page_of[tid], line, ln)
    st.finish_partial()
    return Extraction(st.records, plan.columns, skipped, st.incomplete)


def records_to_csv(ex: Extraction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ex.columns)
    for rec in ex.records:
        w.writerow(rec.row(ex.columns))
    return buf.getvalue()


def records_to_jsonl(ex: Extraction) -> str:
    out = []
    for rec in ex.records:
        obj = {c: rec.values.get(c, "") for c in ex.columns}
        obj["_lines"] = rec.lines
        out.append(json.dumps(obj, ensure_ascii=False))
    return "".join(s + "\n" for s in out)
