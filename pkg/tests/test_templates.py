import numpy as np
import pytest

from docstruct.scoring import DEFAULT_MAP, CharClass, compare_lines
from docstruct.templates import (
    NoGapError,
    RoleRules,
    build_field_layout,
    build_mask,
    classify_role,
    detect_templates,
    gap_threshold,
    match_line,
)
from docstruct.testkit import FIGURE3_COUNTS_200, FIGURE3_ROLES


@pytest.mark.parametrize("scores,expected", [
    ([5, 90], 47.5),
    ([10, 20, 80, 81], 50.0),
    ([0, 19, 44, 87, 100], 65.5),
    ([1, 2, 3], 2.5),  # equal gaps: highest wins
    ([90, 5, 5, 90], 47.5),
])
def test_gap_threshold(scores, expected):
    assert gap_threshold(scores) == expected


@pytest.mark.parametrize("scores", [[], [7], [3, 3, 3]])
def test_gap_threshold_needs_two_values(scores):
    with pytest.raises(NoGapError, match="no gap"):
        gap_threshold(scores)


def test_field_layout_examples():
    assert build_field_layout(["AB  12", "CD  99"]) == ([(1, 2), (5, 6)], "1-5")
    assert build_field_layout(["X 1", "XX1"]) == ([(1, 3)], "1")
    assert build_field_layout(["   "]) == ([], "")
    with pytest.raises(ValueError):
        build_field_layout([])


def test_mask_examples():
    mask = build_mask(["AB 1", "AC 2", "AB"])
    assert mask[0].literal == "A" and not mask[0].optional
    assert mask[1].literal is None and mask[1].classes == frozenset({CharClass.ALPHA})
    assert mask[2].literal == " "
    assert mask[3].optional and mask[3].classes == frozenset({CharClass.NUMERIC})


def test_mask_mixed_column():
    col = build_mask(["1", "A"])[0]
    assert col.literal is None
    assert col.classes == frozenset({CharClass.ALPHA, CharClass.NUMERIC})


@pytest.mark.parametrize("members,max_count,role", [
    (["-------- ----"] * 3, 3, "decor"),
    (["NAME   AMOUNT"] * 2, 9, "heading"),
    (["ITEM 1", "ITEM 2"], 2, "detail"),
    (["ITEM 1", "ITEM 2"], 5, "body"),
    (["PAGE 1"] * 4, 4, "detail"),  # 1 digit in 5 characters is not a heading
])
def test_classify_role(members, max_count, role):
    assert classify_role(members, max_count) == role


def test_classify_role_thresholds_configurable():
    assert classify_role(["AB--"], 9, RoleRules(decor_symbol_fraction=0.5)) == "decor"
    assert classify_role(["PAGE 1"], 9, RoleRules(heading_digit_fraction=0.5)) == "heading"


def test_report_templates(report_lines):
    ts, series = detect_templates(report_lines)
    assert len(ts) == 10
    assert tuple(t.line_count for t in ts) == FIGURE3_COUNTS_200
    assert tuple(t.role for t in ts) == FIGURE3_ROLES
    assert ts[6].key_name == "53-70-74-80-85-94-102-112-123-126"
    assert ts[7].key_name == "53-60"
    assert [t.reference_line for t in ts] == [0, 1, 2, 3, 4, 5, 6, 7, 12, 64]
    assert len(series) == 200


def test_report_series_matches_truth(report):
    lines, truth = report
    _, series = detect_templates(lines)
    assert [t for _, t in series] == truth["series"][:200]


def test_partition(report_lines):
    ts, series = detect_templates(report_lines)
    members = sorted(j for t in ts for j in t.members)
    assert members == list(range(200))
    for t in ts:
        assert t.reference_line == min(t.members)


def test_members_meet_threshold_and_later_lines_do_not(report_lines):
    ts, _ = detect_templates(report_lines)
    owner = {j: t.id for t in ts for j in t.members}
    sample = report_lines[:200]
    for t in ts:
        ref = sample[t.reference_line]
        for j in range(200):
            if j == t.reference_line or owner[j] < t.id:
                continue
            s = compare_lines(ref, sample[j], t.adapted_map)
            if owner[j] == t.id:
                assert s >= t.threshold
            else:
                assert s < t.threshold


def test_blank_lines_have_no_template():
    ts, series = detect_templates(["A 1", "", "A 2", "   ", "A 3"])
    assert [ln for ln, _ in series] == [1, 3, 5]
    assert len(ts) == 1 and ts[0].role == "detail"


def test_one_line_document():
    ts, series = detect_templates(["TOTAL 12.00"])
    assert series == [(1, 0)]
    assert ts[0].threshold is None
    assert ts[0].role == "detail"


def test_empty_document():
    with pytest.raises(ValueError, match="empty document"):
        detect_templates(["", "  "])


def test_non_adaptive_keeps_full_map(report_lines):
    ts, _ = detect_templates(report_lines, adaptive=False)
    for t in ts:
        assert np.array_equal(t.adapted_map, DEFAULT_MAP)


def test_match_line(report_lines):
    ts, series = detect_templates(report_lines)
    ids = dict(series)
    for ln in (1, 5, 6, 7, 8, 13, 65):
        assert match_line(report_lines[ln - 1], ts) == ids[ln]
    assert match_line("", ts) is None
    assert match_line("zz", ts) is None


def test_match_line_after_sample(report):
    lines, truth = report
    ts, _ = detect_templates(lines)
    got = [match_line(s, ts) for s in lines[200:]]
    assert got == truth["series"][200:]


def test_singleton_matches_only_itself():
    ts, _ = detect_templates(["ONE OFF LINE"])
    assert match_line("ONE OFF LINE", ts) == 0
    assert match_line("ONE OFF LINX", ts) is None


def test_detection_is_deterministic(report_lines):
    a, _ = detect_templates(report_lines)
    b, _ = detect_templates(report_lines)
    assert a.to_dict() == b.to_dict()


def test_mask_describe():
    assert "".join(c.describe() for c in build_mask(["A1", "A"])) == "A1?"
    assert build_mask(["1", "2", ""])[0].describe() == "[N]?"
