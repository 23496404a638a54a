from __future__ import annotations

import json
import subprocess
import sys

import pytest

from surzhyk.cli import main


def cli(capsysbinary, *argv):
    code = main(list(map(str, argv)))
    out, err = capsysbinary.readouterr()
    return code, out.decode("utf-8"), err.decode("utf-8")


def rows(out: str) -> list[list[str]]:
    return [line.split("\t") for line in out.splitlines()[1:]]


def test_match_specific(capsysbinary, fixtures_dir):
    code, out, _ = cli(capsysbinary, "match", fixtures_dir, "--rules", "builtin:specific")
    assert code == 0
    assert len(rows(out)) == 11
    assert out.splitlines()[0] == "rule_id\tfile\tline\tfirst_pos\tfirst_word\tsecond_pos\tsecond_word\tdistance\tcontext"


def test_match_prefix_rows(capsysbinary, fixtures_dir):
    code, out, _ = cli(capsysbinary, "match", fixtures_dir, "--rules", "builtin:prefix")
    assert code == 0
    assert [(r[0], r[4], r[5], r[6], r[7]) for r in rows(out)] == [
        ("P1", "подимаюся", "", "", ""),
        ("P1", "подработать", "", "", ""),
        ("P1", "подвів", "", "", ""),
    ]


def test_match_json(capsysbinary, fixtures_dir):
    code, out, _ = cli(capsysbinary, "match", fixtures_dir / "prefix.txt", "--rules", "builtin:prefix", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data) == 3
    assert data[0]["second_pos"] is None and data[0]["file"].endswith("prefix.txt")


def test_match_missing_file(capsysbinary, tmp_path):
    code, out, err = cli(capsysbinary, "match", tmp_path / "missing.txt", "--rules", "builtin:general")
    assert code == 3 and out == "" and "missing.txt" in err


def test_match_decode_error(capsysbinary, tmp_path):
    (tmp_path / "bad.txt").write_bytes(b"\xc3\x28")
    code, out, err = cli(capsysbinary, "match", tmp_path, "--rules", "builtin:general")
    assert code == 3 and "byte offset 0" in err


def test_match_zero_matches_exit_zero(capsysbinary, tmp_path):
    (tmp_path / "a.txt").write_text("нічого тут немає\n", encoding="utf-8")
    code, out, _ = cli(capsysbinary, "match", tmp_path)
    assert code == 0 and rows(out) == []


def test_match_context(capsysbinary, tmp_path):
    (tmp_path / "a.txt").write_text("до\nми тут працюєм\nпісля\n", encoding="utf-8")
    code, out, _ = cli(capsysbinary, "match", tmp_path, "--rules", "builtin:specific", "--context", "1")
    assert rows(out)[0][8] == "до / ми тут працюєм / після"


def test_match_strict_paper_superset(capsysbinary, tmp_path):
    (tmp_path / "a.txt").write_text("руками кажем\nми тут працюєм\n", encoding="utf-8")
    _, default, _ = cli(capsysbinary, "match", tmp_path)
    _, strict, _ = cli(capsysbinary, "match", tmp_path, "--strict-paper")
    assert set(map(tuple, rows(default))) < set(map(tuple, rows(strict)))


def test_bad_rules_spec(capsysbinary, fixtures_dir, tmp_path):
    code, _, err = cli(capsysbinary, "match", fixtures_dir, "--rules", "builtin:nope")
    assert code == 4
    bad = tmp_path / "r.json"
    bad.write_text('{"name": "x", "pair_rules": [{"id": "X", "first": {"mode": "exact_word", "text": "ми"},'
                   ' "second": {"mode": "starts_with", "text": "єм"}, "max_distance": 0}]}', encoding="utf-8")
    code, out, err = cli(capsysbinary, "rules", "--rules", bad)
    assert code == 4 and out == ""
    assert "second pattern must be ends_with" in err and "max_distance ≥ 1" in err
    code, _, _ = cli(capsysbinary, "rules", "--rules", tmp_path / "absent.json")
    assert code == 3


def test_user_rule_file(capsysbinary, tmp_path):
    rules = tmp_path / "r.json"
    rules.write_text(json.dumps({"name": "u", "pair_rules": [
        {"id": "U1", "first": {"mode": "starts_with", "text": "под"}, "second": {"mode": "ends_with", "text": "ть"},
         "max_distance": 2}]}, ensure_ascii=False), encoding="utf-8")
    (tmp_path / "a.txt").write_text("подумав ходить\n", encoding="utf-8")
    code, out, _ = cli(capsysbinary, "match", tmp_path / "a.txt", "--rules", rules)
    assert code == 0 and [r[0] for r in rows(out)] == ["U1"]


@pytest.mark.parametrize("name, count", [("all", 21), ("general", 4), ("specific", 16), ("prefix", 1)])
def test_rules_listing(capsysbinary, name, count):
    code, out, _ = cli(capsysbinary, "rules", "--rules", f"builtin:{name}")
    assert code == 0 and len(rows(out)) == count


def test_rules_listing_content(capsysbinary):
    _, out, _ = cli(capsysbinary, "rules", "--rules", "builtin:specific")
    listing = {r[0]: r for r in rows(out)}
    assert listing["S12"] == ["S12", "pair", "-їм", "-ти", "3", "first len > 2; second len > 2"]
    _, out, _ = cli(capsysbinary, "rules", "--rules", "builtin:prefix")
    assert rows(out) == [["P1", "prefix", "под-", "", "", "len > 3"]]


def test_rules_json_is_loadable(capsysbinary, tmp_path):
    _, out, _ = cli(capsysbinary, "rules", "--format", "json")
    path = tmp_path / "all.json"
    path.write_text(out, encoding="utf-8")
    code, listing, _ = cli(capsysbinary, "rules", "--rules", path)
    assert code == 0 and len(rows(listing)) == 21


def test_tokenize(capsysbinary, tmp_path):
    (tmp_path / "b.txt").write_text("самі сієм\n", encoding="utf-8")
    (tmp_path / "a.txt").write_text("Вообщем уже, да\n", encoding="utf-8")
    (tmp_path / "empty.txt").write_text("", encoding="utf-8")
    code, out, _ = cli(capsysbinary, "tokenize", tmp_path)
    assert code == 0
    assert out.splitlines() == [
        "file\tline\tposition\tword",
        "a.txt\t1\t1\tвообщем",
        "a.txt\t1\t2\tуже",
        "a.txt\t1\t3\tда",
        "b.txt\t1\t1\tсамі",
        "b.txt\t1\t2\tсієм",
    ]
    code, out, _ = cli(capsysbinary, "tokenize", tmp_path / "empty.txt")
    assert out == "file\tline\tposition\tword\n"


def test_evaluate_fixture(capsysbinary, eval_dir, tmp_path):
    _, matches, _ = cli(capsysbinary, "match", eval_dir / "corpus", "--rules", "builtin:specific")
    mpath = tmp_path / "m.tsv"
    mpath.write_text(matches, encoding="utf-8")
    code, out, err = cli(capsysbinary, "evaluate", mpath, eval_dir / "gold_specific.tsv")
    assert code == 0 and err == ""
    total = rows(out)[-1]
    assert total == ["ALL", "12", "11", "1", "0", "0.9167"]


def test_evaluate_json_matches_and_json_report(capsysbinary, eval_dir, tmp_path):
    _, matches, _ = cli(capsysbinary, "match", eval_dir / "corpus", "--rules", "builtin:specific", "--format", "json")
    mpath = tmp_path / "m.json"
    mpath.write_text(matches, encoding="utf-8")
    code, out, _ = cli(capsysbinary, "evaluate", mpath, eval_dir / "gold_specific.tsv", "--format", "json",
                       "--rules", "builtin:specific")
    data = json.loads(out)
    assert code == 0 and len(data["rules"]) == 16
    assert data["total"]["precision"] == pytest.approx(11 / 12)


def test_evaluate_empty_gold(capsysbinary, eval_dir, tmp_path):
    _, matches, _ = cli(capsysbinary, "match", eval_dir / "corpus", "--rules", "builtin:specific")
    (tmp_path / "m.tsv").write_text(matches, encoding="utf-8")
    (tmp_path / "gold.tsv").write_text("", encoding="utf-8")
    code, out, _ = cli(capsysbinary, "evaluate", tmp_path / "m.tsv", tmp_path / "gold.tsv")
    assert code == 0
    assert rows(out)[-1] == ["ALL", "12", "0", "0", "12", "null"]


def test_evaluate_malformed_gold(capsysbinary, eval_dir, tmp_path):
    (tmp_path / "m.tsv").write_text("rule_id\tfile\tline\tfirst_pos\tfirst_word\tsecond_pos\tsecond_word\tdistance\tcontext\n",
                                    encoding="utf-8")
    (tmp_path / "gold.tsv").write_text("S1\ta.txt\t1\t1\t2\tTP\nS1\ta.txt\t2\n", encoding="utf-8")
    code, out, err = cli(capsysbinary, "evaluate", tmp_path / "m.tsv", tmp_path / "gold.tsv")
    assert code == 5 and out == "" and "row 2" in err


def test_evaluate_orphans_on_stderr(capsysbinary, eval_dir, tmp_path):
    (tmp_path / "m.tsv").write_text("rule_id\tfile\tline\tfirst_pos\tfirst_word\tsecond_pos\tsecond_word\tdistance\tcontext\n",
                                    encoding="utf-8")
    code, out, err = cli(capsysbinary, "evaluate", tmp_path / "m.tsv", eval_dir / "gold_specific.tsv")
    assert code == 0 and err.count("orphan") == 12
    assert out.splitlines()[-1] == "ALL\t0\t0\t0\t0\tnull"


def test_evaluate_bad_match_file(capsysbinary, eval_dir, tmp_path):
    (tmp_path / "m.tsv").write_text("not a match file\n", encoding="utf-8")
    code, _, _ = cli(capsysbinary, "evaluate", tmp_path / "m.tsv", eval_dir / "gold_specific.tsv")
    assert code == 3


def test_pipeline_identity(capsysbinary, fixtures_dir, tmp_path):
    _, matches, _ = cli(capsysbinary, "match", fixtures_dir, "--rules", "builtin:all")
    (tmp_path / "m.tsv").write_text(matches, encoding="utf-8")
    gold = ["rule_id\tfile\tline\tfirst_pos\tsecond_pos\tlabel"]
    gold += [f"{r[0]}\t{r[1]}\t{r[2]}\t{r[3]}\t{r[5] or 0}\tTP" for r in rows(matches)]
    (tmp_path / "gold.tsv").write_text("\n".join(gold) + "\n", encoding="utf-8")
    _, out, err = cli(capsysbinary, "evaluate", tmp_path / "m.tsv", tmp_path / "gold.tsv")
    assert all(r[4] == "0" for r in rows(out)) and err == ""


def test_usage_error_exit_code(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "surzhyk", "match"], capture_output=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "surzhyk", "match", str(tmp_path), "--format", "xml"],
                          capture_output=True)
    assert proc.returncode == 2


def test_subprocess_outputs_utf8(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "surzhyk", "match", str(fixtures_dir), "--rules", "builtin:prefix"],
                          capture_output=True, env={"PYTHONIOENCODING": "ascii", "PATH": ""})
    assert proc.returncode == 0
    assert "подвів" in proc.stdout.decode("utf-8")
