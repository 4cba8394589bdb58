import argparse
import json
import subprocess
import sys

from fracube import cli


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "fracube", *args],
        capture_output=True, text=True, timeout=600)


def test_inspect_dendrite_representative():
    out = run_cli("inspect", "020_101_110_111_112_121_202")
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["dendrite"] is True
    assert doc["label"] == "7_11"
    assert doc["connected"] and doc["one_point"]
    assert doc["no_triple_points"] is True
    assert len(doc["faces"]) == 26


def test_inspect_non_dendrite_representative():
    out = run_cli("inspect", "012_021_102_111_120_201_210")
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["dendrite"] is False
    assert doc["label"] == "nonden1"


def test_inspect_rejects_duplicate_digit():
    out = run_cli("inspect", "000_000_111")
    assert out.returncode != 0
    assert "twice" in out.stderr


def test_inspect_strict_exit_code():
    relaxed = run_cli("inspect", "000_002_020_200_022_202_220")
    assert relaxed.returncode == 0
    strict = run_cli("inspect", "000_002_020_200_022_202_220", "--strict")
    assert strict.returncode == 1


def test_inspect_markdown():
    out = run_cli("inspect", "020_101_110_111_112_121_202", "--format", "md")
    assert out.returncode == 0
    assert "| offset | face |" in out.stdout
    assert out.stdout.endswith("\n")


def test_enumerate_single_cells():
    out = run_cli("enumerate", "--pieces", "1")
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["meta"]["classes"] == 4
    md = run_cli("enumerate", "--pieces", "1", "--format", "md")
    assert "| N |" in md.stdout
    csv_out = run_cli("enumerate", "--pieces", "2", "--format", "csv", "--workers", "2")
    assert csv_out.stdout.splitlines()[0].startswith("canonical,")


def test_export_cell_counts(tmp_path):
    out = run_cli("export", "020_101_110_111_112_121_202", "--depth", "1")
    assert out.returncode == 0
    assert len(out.stdout.splitlines()) == 7
    target = tmp_path / "cells.txt"
    out4 = run_cli("export", "020_101_110_111_112_121_202", "--depth", "4",
                   "--out", str(target))
    assert out4.returncode == 0
    assert sum(1 for _ in target.open()) == 7 ** 4


def test_export_obj_structure():
    out = run_cli("export", "020_101_110_111_112_121_202", "--depth", "2",
                  "--format", "obj")
    lines = out.stdout.splitlines()
    assert sum(1 for l in lines if l.startswith("v ")) == 8 * 49
    assert sum(1 for l in lines if l.startswith("f ")) == 12 * 49


def test_export_budget_error():
    out = run_cli("export", "020_101_110_111_112_121_202", "--depth", "12")
    assert out.returncode == 2
    assert "budget" in out.stderr.lower()


def test_outputs_end_with_newline(tmp_path):
    for args in (("inspect", "000"),
                 ("enumerate", "--pieces", "1", "--format", "csv"),
                 ("export", "000", "--depth", "1")):
        out = run_cli(*args)
        assert out.stdout.endswith("\n")


def test_enumerate_worker_count_does_not_change_bytes():
    solo = run_cli("enumerate", "--pieces", "2", "--workers", "1")
    duo = run_cli("enumerate", "--pieces", "2", "--workers", "2")
    assert solo.stdout == duo.stdout


def test_verify_reports_known_reference_mismatch(full_report, monkeypatch, capsys, tmp_path):
    # reuse the session report instead of re-running the enumeration
    monkeypatch.setattr(cli.pipeline, "classify_all", lambda **kw: full_report)
    target = tmp_path / "verify.txt"
    args = argparse.Namespace(workers=1, skip_oracle=True, out=str(target))
    assert cli.cmd_verify(args) == 1
    text = target.read_text()
    assert "104/105 matched" in text
    assert "000_001_010_020_111_221_222" in text


def test_verify_oracle_sweep_counts(full_report, monkeypatch, tmp_path):
    monkeypatch.setattr(cli.pipeline, "classify_all", lambda **kw: full_report)
    target = tmp_path / "verify.txt"
    args = argparse.Namespace(workers=1, skip_oracle=False, out=str(target))
    assert cli.cmd_verify(args) == 1  # the one reference mismatch stays
    text = target.read_text()
    assert "2730/2730 face checks agreed" in text
