import json

import pytest
from click.testing import CliRunner

from docstruct import cli as cli_mod
from docstruct.cli import main
from docstruct.pipeline import (
    ConfigError,
    EmptyDocumentError,
    RunConfig,
    analyze,
    read_document,
    split_lines,
    write_atomic,
)
from docstruct.testkit import FIGURE3_DSS


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def report_file(tmp_path, report_lines):
    p = tmp_path / "report.txt"
    p.write_text("\n".join(report_lines) + "\n")
    return p


def test_split_lines():
    assert split_lines("a\r\nb\t|\n  \n") == ["a", "b       |", ""]
    assert split_lines("") == []
    assert split_lines("x") == ["x"]


def test_read_document_encodings(tmp_path):
    p = tmp_path / "doc.txt"
    p.write_bytes("CAFÉ 1\r\nNAÏVE 2\r\n".encode("latin-1"))
    assert read_document(p) == ["CAFÉ 1", "NAÏVE 2"]
    p.write_bytes("CAFÉ 1\n".encode("utf-8"))
    assert read_document(p) == ["CAFÉ 1"]


def test_empty_document():
    with pytest.raises(EmptyDocumentError, match="empty document"):
        analyze(["", "   "])


def test_pipeline_report(report_lines):
    a = analyze(report_lines)
    assert a.dss == FIGURE3_DSS
    assert a.unmatched == 0
    assert len(a.series) == 400
    assert a.detail_ids == [6, 7]


def test_small_sample_still_assigns_every_line(report_lines):
    a = analyze(report_lines, RunConfig(sample_lines=120))
    assert all(t is not None for t in a.template_ids)


def test_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# settings\nsample-lines = 50\nadaptive = no  # full map\nformat = jsonl\n")
    cfg = RunConfig.from_file(p)
    assert (cfg.sample_lines, cfg.adaptive, cfg.format) == (50, False, "jsonl")
    assert cfg.with_overrides(sample_lines=80, min_similarity=None).sample_lines == 80


@pytest.mark.parametrize("body", ["nonsense\n", "colour = red\n", "sample_lines = many\n",
                                  "sample_lines = 0\n", "format = xml\n"])
def test_config_errors(tmp_path, body):
    p = tmp_path / "bad.cfg"
    p.write_text(body)
    with pytest.raises(ConfigError):
        RunConfig.from_file(p)


def test_write_atomic_leaves_no_temp(tmp_path):
    target = tmp_path / "sub" / "out.txt"
    write_atomic(target, "x\n")
    write_atomic(target, "y\n")
    assert target.read_text() == "y\n"
    assert [q.name for q in target.parent.iterdir()] == ["out.txt"]


def test_cli_analyze(runner, report_file, tmp_path):
    out = tmp_path / "out"
    r = runner.invoke(main, ["analyze", str(report_file), "--out-dir", str(out)])
    assert r.exit_code == 0, r.output
    assert r.stdout.strip() == FIGURE3_DSS
    assert (out / "dss.txt").read_text() == FIGURE3_DSS + "\n"
    doc = json.loads((out / "templates.json").read_text())
    assert len(doc["templates"]) == 10
    assert doc["detail_ids"] == [6, 7]
    assert doc["structure"]["structures"][0]["pattern"]["dss"] == "[[5, [6, 7], 8], 9]"
    series = (out / "series.csv").read_text().splitlines()
    assert series[0] == "line,template_id" and len(series) == 401


def test_cli_outputs_are_deterministic(runner, report_file, tmp_path):
    blobs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        args = ["analyze", str(report_file), "--out-dir", str(out), "--emit-svg"]
        assert runner.invoke(main, args).exit_code == 0
        blobs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert blobs[0] == blobs[1]
    assert set(blobs[0]) == {"dss.txt", "templates.json", "series.csv", "chart.svg"}


def test_cli_extract(runner, report_file, tmp_path):
    r = runner.invoke(main, ["extract", str(report_file), "--out-dir", str(tmp_path), "--format", "jsonl"])
    assert r.exit_code == 0, r.output
    rows = (tmp_path / "records.jsonl").read_text().splitlines()
    assert len(rows) == 133
    assert "skipped 0" in r.stderr
    r = runner.invoke(main, ["extract", str(report_file), "--out-dir", str(tmp_path)])
    assert r.exit_code == 0
    assert len((tmp_path / "records.csv").read_text().splitlines()) == 134


def test_cli_config_and_flag_precedence(runner, report_file, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(f"format = jsonl\nout_dir = {tmp_path / 'a'}\n")
    r = runner.invoke(main, ["extract", str(report_file), "--config", str(cfg),
                             "--out-dir", str(tmp_path / "b")])
    assert r.exit_code == 0, r.output
    assert (tmp_path / "b" / "records.jsonl").exists()
    assert not (tmp_path / "a").exists()


def test_cli_score(runner, report_file):
    r = runner.invoke(main, ["score", "--file", str(report_file), "--lines", "7,9"])
    assert r.exit_code == 0, r.output
    lines = r.stdout.splitlines()
    assert lines[0] == "score: 113.85"
    assert len(lines) == 1 + 1 + 15 + 1
    assert lines[-1] == "variation range: 96.79 - 135.97"
    r = runner.invoke(main, ["score", "--file", str(report_file), "--lines", "1,55"])
    assert r.stdout.count("influential") == 6


def test_cli_score_literal_lines(runner):
    r = runner.invoke(main, ["score", "AB 12", "AB 12"])
    assert r.exit_code == 0
    assert r.stdout.startswith("score: ")


@pytest.mark.parametrize("args", [["score"], ["score", "--lines", "1,2", "x", "y"],
                                  ["analyze"], ["bogus"]])
def test_cli_usage_errors(runner, args):
    assert runner.invoke(main, args).exit_code == 2


def test_cli_score_bad_line_numbers(runner, report_file):
    r = runner.invoke(main, ["score", "--file", str(report_file), "--lines", "1,999"])
    assert r.exit_code == 2


def test_cli_empty_and_missing_input(runner, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("\n\n")
    r = runner.invoke(main, ["analyze", str(empty), "--out-dir", str(tmp_path)])
    assert r.exit_code == 2
    assert "empty document" in r.stderr
    assert not (tmp_path / "dss.txt").exists()
    r = runner.invoke(main, ["analyze", str(tmp_path / "nope.txt")])
    assert r.exit_code == 2


def test_cli_bad_score_map(runner, report_file, tmp_path):
    m = tmp_path / "m.txt"
    m.write_text("1 2 3\n")
    r = runner.invoke(main, ["analyze", str(report_file), "--score-map", str(m),
                             "--out-dir", str(tmp_path)])
    assert r.exit_code == 2


def test_cli_internal_error(runner, report_file, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("kaput")

    monkeypatch.setattr(cli_mod, "analyze", boom)
    r = runner.invoke(main, ["analyze", str(report_file)])
    assert r.exit_code == 1
    assert "kaput" in r.stderr


def test_cli_chart(runner, tmp_path):
    data = tmp_path / "s.csv"
    data.write_text("line,template_id\n1,0\n2,3\n3,1\n")
    out = tmp_path / "c.svg"
    r = runner.invoke(main, ["chart", str(data), "--out", str(out), "--title", "A & B"])
    assert r.exit_code == 0
    svg = out.read_text()
    assert svg.count('class="marker"') == 3
    assert 'data-y-max="3"' in svg and "A &amp; B" in svg
    data.write_text("line,template_id\n")
    assert runner.invoke(main, ["chart", str(data), "--out", str(out)]).exit_code == 2
    data.write_text("a,b\n1,x\n")
    assert runner.invoke(main, ["chart", str(data), "--out", str(out)]).exit_code == 2


def test_cli_gen_report(runner, tmp_path):
    doc, truth = tmp_path / "d.txt", tmp_path / "t.json"
    r = runner.invoke(main, ["gen", "--out", str(doc), "--truth", str(truth), "--lines", "65"])
    assert r.exit_code == 0
    assert len(doc.read_text().splitlines()) == 65
    t = json.loads(truth.read_text())
    assert len(t["series"]) == 65 and all(rec["lines"][-1] <= 65 for rec in t["records"])


def test_cli_gen_random_round_trip(runner, tmp_path):
    doc, truth = tmp_path / "d.txt", tmp_path / "t.json"
    r = runner.invoke(main, ["gen", "--spec", "random", "--seed", "42", "--depth", "3",
                             "--out", str(doc), "--truth", str(truth)])
    assert r.exit_code == 0
    r = runner.invoke(main, ["analyze", str(doc), "--out-dir", str(tmp_path)])
    assert r.stdout.strip() == json.loads(truth.read_text())["dss"]


def test_cli_gen_from_spec_file(runner, tmp_path):
    from docstruct.testkit import random_spec

    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(random_spec(3, depth=2, noise=False).to_dict()))
    out = tmp_path / "d.txt"
    r = runner.invoke(main, ["gen", "--spec", str(spec), "--lines", "80", "--out", str(out)])
    assert r.exit_code == 0
    assert len(out.read_text().splitlines()) >= 80
    spec.write_text("{not json")
    assert runner.invoke(main, ["gen", "--spec", str(spec), "--out", str(out)]).exit_code == 2
