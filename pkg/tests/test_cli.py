import hashlib
import json
import os
import subprocess
import sys

import pytest

from conftest import five_cards
from ldmf.cli import default_seed, main
from ldmf.ir import serialize_document


@pytest.fixture
def design(tmp_path):
    path = tmp_path / "cards.json"
    path.write_text(serialize_document(five_cards()))
    return path


def digests(directory):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(directory.iterdir())}


def test_convert_writes_four_files(design, tmp_path):
    out = tmp_path / "out"
    assert main(["convert", "--in", str(design), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == [
        "findings.json", "index.html", "instructions.json", "style.css"]


def test_convert_is_deterministic(design, tmp_path):
    main(["convert", "--in", str(design), "--out", str(tmp_path / "a")])
    main(["convert", "--in", str(design), "--out", str(tmp_path / "b")])
    assert digests(tmp_path / "a") == digests(tmp_path / "b")


def test_no_components_flag(design, tmp_path):
    out = tmp_path / "out"
    assert main(["convert", "--in", str(design), "--out", str(out), "--no-components"]) == 0
    prog = json.loads((out / "instructions.json").read_text())
    assert prog["components"] == []


def test_malformed_json_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"screens": [')
    assert main(["convert", "--in", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "SyntaxError" in capsys.readouterr().err


def test_missing_file_exits_1(tmp_path):
    assert main(["convert", "--in", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 1


def test_score_round_trip(design, tmp_path):
    out = tmp_path / "out"
    main(["convert", "--in", str(design), "--out", str(out)])
    rep = tmp_path / "rep"
    assert main(["score", "--design", str(design), "--instructions", str(out / "instructions.json"),
                 "--out", str(rep)]) == 0
    data = json.loads((rep / "pms.json").read_text())
    assert [s["pms"] for s in data["perScreen"]] == [100.0]
    assert (rep / "pms.md").exists()
    lines = (rep / "histogram.csv").read_text().splitlines()
    assert lines[0] == "bucket_low,bucket_high,count" and len(lines) == 21


def test_score_with_empty_screen_list_exits_1(design, tmp_path):
    out = tmp_path / "out"
    main(["convert", "--in", str(design), "--out", str(out)])
    empty = tmp_path / "empty.json"
    empty.write_text('{"screens": []}')
    assert main(["score", "--design", str(empty), "--instructions", str(out / "instructions.json"),
                 "--out", str(tmp_path / "rep")]) == 1


def test_gen_corpus_and_deopt(tmp_path):
    out = tmp_path / "corpus"
    assert main(["gen-corpus", "--n", "3", "--seed", "1", "--depth", "2..3", "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert [d["name"] for d in manifest["designs"]] == ["design_0000", "design_0001", "design_0002"]
    assert all(2 <= d["depth"] <= 3 for d in manifest["designs"])
    target = tmp_path / "flat.json"
    assert main(["deopt", "--in", str(out / "design_0000.json"), "--seed", "1", "--out", str(target)]) == 0
    assert target.read_text() == (out / "design_0000.deopt.json").read_text()


def test_eval_tags(tmp_path, capsys):
    out = tmp_path / "corpus"
    main(["gen-corpus", "--n", "1", "--seed", "4", "--out", str(out)])
    gold = out / "design_0000.tags.json"
    conv = tmp_path / "conv"
    main(["convert", "--in", str(out / "design_0000.json"), "--out", str(conv)])
    rep = tmp_path / "rep"
    assert main(["eval-tags", "--pred", str(conv / "instructions.json"), "--gold", str(gold),
                 "--out", str(rep)]) == 0
    assert json.loads((rep / "tags.json").read_text())["macroSmall"] == 100.0
    assert main(["eval-tags", "--pred", str(gold), "--gold", str(gold), "--out", str(rep)]) == 0


def test_eval_tags_disjoint_ids_exit_1(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text('{"x": "button"}')
    b.write_text('{"y": "button"}')
    assert main(["eval-tags", "--pred", str(a), "--gold", str(b), "--out", str(tmp_path / "r")]) == 1


def test_seed_env_override(monkeypatch):
    monkeypatch.setenv("LDMF_SEED", "123")
    assert default_seed() == 123
    monkeypatch.delenv("LDMF_SEED")
    assert default_seed() == 42


def test_console_entry_point(design, tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ldmf.cli", "convert", "--in", str(design),
                           "--out", str(tmp_path / "o")], capture_output=True, text=True,
                          env={**os.environ})
    assert proc.returncode == 0, proc.stderr
