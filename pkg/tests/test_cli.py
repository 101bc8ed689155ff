"""End-to-end CLI: subcommands, exit codes, determinism, golden corpus."""

import json
import os
from pathlib import Path

import pytest

from flatmix.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(args):
    return main(args)


def test_classify_integrable_triangle_exit_10(tmp_path):
    out = tmp_path / "v.json"
    rc = run(["classify", "--triangle", "1/2,1/4,1/4", "--out", str(out)])
    assert rc == 10
    verdict = json.loads(out.read_text())
    assert verdict["weakly_mixing"] is False
    assert verdict["subtype"] == "integrable"


def test_classify_generic_triangle_exit_0(tmp_path):
    out = tmp_path / "v.json"
    rc = run(["classify", "--triangle", "1/5,1/5,3/5", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["weakly_mixing"] is True


def test_validate_not_closed_exit_65(tmp_path):
    poly = tmp_path / "bad.json"
    poly.write_text(json.dumps({
        "angles": [[1, 2], [1, 4], [1, 4]],
        "lengths": [["1/1"], ["1/1"], ["1/1"]],
        "field": {"min_poly": [0, 1], "embedding": [0, 1, 0, 1]},
    }))
    rc = run(["validate", "--polygon", str(poly), "--out", str(tmp_path / "o.json")])
    assert rc == 65


def test_usage_error_exit_64():
    assert run(["frobnicate"]) == 64
    assert run([]) == 64


def test_unfold_periods_roundtrip(tmp_path):
    surf = tmp_path / "s.json"
    assert run(["unfold", "--triangle", "1/5,1/5,3/5", "--out", str(surf)]) == 0
    data = json.loads(surf.read_text())
    assert data["genus"] == 2
    assert data["stratum"] == [2]
    assert data["deck_order"] == 5
    per = tmp_path / "p.json"
    assert run(["periods", "--surface", str(surf), "--out", str(per)]) == 0
    pdata = json.loads(per.read_text())
    assert pdata["genus"] == 2
    assert len(pdata["re"]) == 4
    assert run(["classify", "--surface", str(surf),
                "--out", str(tmp_path / "v.json")]) == 0


def test_polygon_json_roundtrip_classify(tmp_path):
    poly = tmp_path / "l.json"
    poly.write_text(json.dumps({
        "l_shape": {"horizontals": ["1", "1"], "verticals": ["1", "1"]}
    }))
    rc = run(["classify", "--polygon", str(poly), "--out", str(tmp_path / "v.json")])
    assert rc == 10
    verdict = json.loads((tmp_path / "v.json").read_text())
    assert verdict["reason"] == "COMMENSURABLE_K2"


def test_iet_csv(tmp_path):
    surf = tmp_path / "s.json"
    run(["unfold", "--triangle", "1/5,1/5,3/5", "--out", str(surf)])
    out = tmp_path / "iet.csv"
    rc = run(["iet", "--surface", str(surf), "--direction", "1,2",
              "--steps", "3", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "step,matrix,lengths"
    assert len(lines) == 5


def test_corpus_matches_golden(tmp_path):
    prefix = tmp_path / "corpus"
    assert run(["corpus", "--out-prefix", str(prefix)]) == 0
    got = (tmp_path / "corpus.csv").read_bytes()
    want = (GOLDEN / "corpus.csv").read_bytes()
    assert got == want
    got_json = (tmp_path / "corpus.json").read_bytes()
    want_json = (GOLDEN / "corpus.json").read_bytes()
    assert got_json == want_json


def test_corpus_byte_identical_across_runs(tmp_path):
    p1, p2 = tmp_path / "a", tmp_path / "b"
    assert run(["corpus", "--out-prefix", str(p1)]) == 0
    assert run(["corpus", "--out-prefix", str(p2)]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_diagnose_tracker_with_figure(tmp_path):
    surf = tmp_path / "s.json"
    run(["unfold", "--triangle", "1/5,1/5,3/5", "--out", str(surf)])
    prefix = tmp_path / "trk"
    rc = run(["diagnose", "--surface", str(surf), "--mode", "tracker",
              "--direction", "1,2", "--alpha", "1.0", "--steps", "10",
              "--out-prefix", str(prefix), "--plot"])
    assert rc == 0
    assert (tmp_path / "trk.csv").exists()
    assert (tmp_path / "trk.json").exists()
    assert (tmp_path / "trk.png").stat().st_size > 0


def test_diagnose_correlation_requires_seed(tmp_path):
    surf = tmp_path / "s.json"
    run(["unfold", "--triangle", "1/5,1/5,3/5", "--out", str(surf)])
    rc = run(["diagnose", "--surface", str(surf), "--mode", "correlation",
              "--direction", "1,2", "--T-values", "10",
              "--out-prefix", str(tmp_path / "c")])
    assert rc == 65


def test_diagnose_seeded_csv_byte_identical(tmp_path):
    surf = tmp_path / "s.json"
    run(["unfold", "--triangle", "1/5,1/5,3/5", "--out", str(surf)])
    args = ["diagnose", "--surface", str(surf), "--mode", "correlation",
            "--direction", "1,2", "--seed", "7", "--T-values", "10,50",
            "--samples", "3"]
    assert run(args + ["--out-prefix", str(tmp_path / "c1")]) == 0
    assert run(args + ["--out-prefix", str(tmp_path / "c2")]) == 0
    assert (tmp_path / "c1.csv").read_bytes() == (tmp_path / "c2.csv").read_bytes()


def test_diagnose_exclusion(tmp_path):
    surf = tmp_path / "s.json"
    run(["unfold", "--triangle", "1/5,1/5,3/5", "--out", str(surf)])
    prefix = tmp_path / "exc"
    rc = run(["diagnose", "--surface", str(surf), "--mode", "exclusion",
              "--direction", "1,2", "--epsilon", "0.05",
              "--schedule", "6,12", "--out-prefix", str(prefix)])
    assert rc == 0
    summary = json.loads((tmp_path / "exc.json").read_text())
    assert summary["replay_sound"] is True


def test_rigidity_command(tmp_path):
    surf = tmp_path / "s.json"
    run(["unfold", "--triangle", "1/5,1/5,3/5", "--out", str(surf)])
    out = tmp_path / "rig.json"
    fig = tmp_path / "rig.png"
    rc = run(["rigidity", "--surface", str(surf), "--direction", "0,1",
              "--L", "8", "--out", str(out), "--plot", str(fig)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["verification"]["passed"] is True
    assert fig.stat().st_size > 0


def test_schema_flag(capsys):
    assert run(["--schema"]) == 0
    out = capsys.readouterr().out
    assert "min_poly" in out
