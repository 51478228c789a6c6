import json

import pytest

from docstruct.extraction import (
    Binding,
    NoDetailLevelError,
    build_plan,
    extract,
    records_to_csv,
    records_to_jsonl,
)
from docstruct.hierarchy import HierarchyResult, Pattern
from docstruct.pipeline import analyze, run_extraction
from docstruct.testkit import gen_document, random_spec


@pytest.fixture(scope="module")
def report_run(report_lines):
    a = analyze(report_lines)
    plan, ex = run_extraction(a)
    return a, plan, ex


def test_plan_levels(report_run):
    _, plan, _ = report_run
    assert plan.detail_ids == [6, 7]
    assert plan.depth == 2
    assert {k: [b.template_id for b in v] for k, v in plan.headers.items()} == {1: [5], 2: []}
    assert {k: [b.template_id for b in v] for k, v in plan.footers.items()} == {1: [8], 2: [9]}
    assert [b.template_id for b in plan.page] == [0, 1]


def test_column_order(report_run):
    _, plan, _ = report_run
    prefixes = [c.split("_T")[0] for c in plan.columns]
    firsts = list(dict.fromkeys(prefixes))
    assert firsts == ["P", "L1_H", "D", "L1_F", "L2_F"]
    assert "D_T6_C53" in plan.columns and "L1_F_T8_C54" in plan.columns


def test_record_count_and_clean_run(report, report_run):
    _, _, ex = report_run
    assert len(ex) == len(report[1]["records"]) == 133
    assert ex.skipped == 0 and ex.incomplete == 0


def test_records_match_planted_values(report, report_run):
    _, plan, ex = report_run
    for rec, truth in zip(ex, report[1]["records"]):
        assert rec.lines == truth["lines"]
        group = [rec.values[c] for c in plan.columns if c.startswith("L1_H")]
        assert group == truth["group"]
        detail = [rec.values[c] for c in plan.columns if c.startswith("D_")]
        assert [v for v in truth["item"] if v] == [v for v in detail if v]
        assert rec.values["L1_F_T8_C54"] == truth["invoice_total"]
        assert rec.values["L2_F_T9_C53"] == truth["division_total"]


def test_first_group(report_run):
    _, _, ex = report_run
    first = [r for r in ex if r.values["L1_H_T5_C21"] == "0130687732I" and r.lines[0] < 14]
    assert [r.lines for r in first] == [[7, 8], [9, 10], [11, 12]]
    assert {r.values["L1_F_T8_C54"] for r in first} == {"(-550.16)"}
    assert {r.groups for r in first} == {(1, 1)}
    assert first[0].values["P_T0_C128"] == "1"


def test_provenance(report_lines, report_run):
    _, plan, ex = report_run
    binding = {c: bd for bd in [*plan.page, *plan.detail,
                                *(x for v in plan.headers.values() for x in v),
                                *(x for v in plan.footers.values() for x in v)]
               for c in bd.columns}
    for rec in ex.records[::7]:
        for col, ln in rec.sources.items():
            bd = binding[col]
            src = report_lines[ln - 1]
            i, j = bd.slices(src)[bd.columns.index(col)]
            assert rec.values[col] == src[i:j].strip()
            assert rec.values[col] in src


def test_page_values_follow_pages(report, report_run):
    _, _, ex = report_run
    starts = report[1]["page_starts"]
    for rec in ex:
        page = sum(1 for s in starts if s <= rec.lines[0])
        assert rec.values["P_T0_C128"] == str(page)


def test_records_in_document_order(report_run):
    _, _, ex = report_run
    firsts = [r.lines[0] for r in ex]
    assert firsts == sorted(firsts)


def test_incomplete_record():
    lines = ["ITEM 1001  AB", "   NOTE X", "ITEM 1002  CD", "ITEM 1003  EF", "   NOTE Z"] * 3
    a = analyze(lines)
    plan, ex = run_extraction(a)
    if len(plan.detail) == 2:
        assert ex.incomplete == 3
        lone = [r for r in ex if not r.complete]
        assert all(len(r.lines) == 1 for r in lone)


def test_unmatched_lines_are_skipped(report_lines):
    lines = list(report_lines)
    lines.insert(250, "???? completely different ~~~~ 1")
    a = analyze(lines)
    _, ex = run_extraction(a)
    assert ex.skipped == 1
    assert len(ex) == 133


def test_no_detail_level():
    h = HierarchyResult([Pattern([1, 2])])
    a = analyze(["ONE 1", "TWO  X"])
    with pytest.raises(NoDetailLevelError, match="no detail level"):
        build_plan(a.templates, h)


def test_detail_only_plan():
    lines = ["%05d  %s" % (i, "ABCDEFG"[i % 7] * 4) for i in range(30)]
    a = analyze(lines)
    plan, ex = run_extraction(a)
    assert plan.depth == 0 and not plan.page
    assert len(ex) == 30
    assert ex[4].values == {"D_T0_C1": "00004", "D_T0_C8": "EEEE"}


def test_empty_input(report_run):
    a, plan, _ = report_run
    ex = extract([], a.templates, plan)
    assert len(ex) == 0 and ex.skipped == 0


def test_extract_without_precomputed_ids(report_lines, report_run):
    a, plan, ex = report_run
    again = extract(report_lines, a.templates, plan)
    assert [r.values for r in again] == [r.values for r in ex]


def test_binding_columns():
    assert Binding(6, 0, "D", ((53, 63),)).columns == ["D_T6_C53"]
    assert Binding(5, 1, "H", ((1, 2), (5, 12))).columns == ["L1_H_T5_C1", "L1_H_T5_C5"]
    assert Binding(0, -1, "P", ((2, 8),)).values(" REPORT: X") == ["REPORT:"]


def test_binding_widens_to_word_edges():
    b = Binding(0, -1, "P", ((6, 6), (10, 12)))
    assert b.values("PAGE 10  ABC") == ["10", "ABC"]
    assert b.values(" 163.04  XY") == ["163.04", "XY"]
    assert b.values("PAGE") == ["", ""]


def test_writers(report_run):
    _, plan, ex = report_run
    csv_text = records_to_csv(ex)
    rows = csv_text.splitlines()
    assert rows[0].split(",") == plan.columns
    assert len(rows) == 134
    objs = [json.loads(s) for s in records_to_jsonl(ex).splitlines()]
    assert objs[0]["_lines"] == [7, 8]
    assert objs[0]["L1_F_T8_C54"] == "(-550.16)"


@pytest.mark.parametrize("seed", [1, 2, 5, 42])
def test_generated_documents(seed):
    lines, truth = gen_document(random_spec(seed, noise=False))
    a = analyze(lines)
    assert a.dss == truth.dss
    plan, ex = run_extraction(a)
    assert len(ex) == len(truth.records)
    for rec, t in zip(ex, truth.records):
        assert rec.lines == t["lines"]
        detail = [rec.values[c] for c in plan.columns if c.startswith("D_")]
        assert detail == t["detail"]
        ctx = [v for c, v in rec.values.items() if c.startswith("L") and v]
        assert sorted(ctx) == sorted(t["context"])
