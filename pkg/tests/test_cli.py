import json
import subprocess
import sys
from pathlib import Path

import pytest

from strategyproof_review.cli import main

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"
SIX = str(DATA / "six.csv")
PROFILE = str(DATA / "six_profile.json")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_pipeline_matches_golden(tmp_path, capsys):
    code, out, _ = run(capsys, "pipeline", "-g", SIX, "--mu", 2, "--lambda", 1, "--profile", PROFILE,
                       "--seed", 7, "--trials", 200, "--out", tmp_path)
    assert code == 0
    written = json.loads(out)
    assert set(written) == {"stats.json", "partition.json", "assignment.json", "ranking.json",
                            "gu_report.json", "sp_report.json"}
    for name in written:
        assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), name


def test_golden_matches_hand_trace():
    parts = json.loads((GOLDEN / "partition.json").read_text())
    assert parts["C"] == {"reviewers": ["r1", "r2"], "papers": ["p1", "p2"]}
    sets = json.loads((GOLDEN / "assignment.json").read_text())["review_sets"]
    assert sets["r1"] == ["p3", "p5"] and sets["r2"] == ["p4", "p6"]
    assert sets["r3"] == ["p1"] and sets["r4"] == ["p2"]
    # side Cbar (4 papers) fills slots 1,3,4,6 with p4 p5 p3 p6; side C fills 2,5
    assert json.loads((GOLDEN / "ranking.json").read_text()) == ["p4", "p1", "p5", "p3", "p2", "p6"]


def test_pipeline_is_byte_stable(tmp_path, capsys):
    for sub in ("a", "b"):
        run(capsys, "pipeline", "-g", SIX, "--mu", 2, "--lambda", 1, "--profile", PROFILE,
            "--seed", 3, "--out", tmp_path / sub)
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_report_matches_golden(capsys):
    code, out, _ = run(capsys, "report", *sorted(GOLDEN.glob("*.json")))
    assert code == 0
    assert out == (GOLDEN / "report.txt").read_text()


def test_report_missing_file(capsys):
    code, _, err = run(capsys, "report", DATA / "nope.json")
    assert code != 0 and err


def test_empty_graph_pipeline(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"reviewers": ["a", "b"], "papers": ["x", "y"], "conflicts": []}))
    code, _, _ = run(capsys, "pipeline", "-g", g, "--mu", 1, "--lambda", 1, "--out", tmp_path / "o")
    assert code == 0
    sets = json.loads((tmp_path / "o" / "assignment.json").read_text())["review_sets"]
    assert sorted(p for ps in sets.values() for p in ps) == ["x", "y"]


def test_empty_stats_table(tmp_path, capsys):
    f = tmp_path / "e.csv"
    f.write_text("author_id,paper_id\n")
    code, out, _ = run(capsys, "stats", "-g", f, "--tsv")
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()] == ["0", "0", "0.00", "0", "0", "0, 0", "0, 0"]


def test_stats_and_prune_golden(capsys):
    code, out, _ = run(capsys, "stats", "-g", DATA / "authorship_small.csv")
    assert code == 0 and out == (GOLDEN / "authorship_stats.txt").read_text()
    code, out, _ = run(capsys, "prune", "-g", DATA / "authorship_small.csv", "--remove", 4,
                       "--checkpoints", "1,2,3,4", "--tsv")
    assert code == 0 and out == (GOLDEN / "authorship_prune.tsv").read_text()


def test_prune_json_feeds_report(tmp_path, capsys):
    out_file = tmp_path / "prune.json"
    run(capsys, "prune", "-g", DATA / "authorship_small.csv", "--remove", 2, "--json", "-o", out_file)
    code, out, _ = run(capsys, "report", out_file)
    assert code == 0 and "Pruning trace" in out and "#Components" in out


def test_infeasible_exit_code(tmp_path, capsys):
    f = tmp_path / "k.csv"
    f.write_text("author_id,paper_id\na,x\na,y\nb,x\nb,y\n")
    code, _, err = run(capsys, "pipeline", "-g", f, "--mu", 2, "--lambda", 1, "--out", tmp_path / "o")
    assert code == 3
    msg = json.loads(err)
    assert msg["stage"] == "partition" and msg["code"] == "infeasible-partition"
    assert "prune" in msg["message"]


def test_parse_exit_code(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("author_id,paper_id\nonly-one-field\n")
    code, _, err = run(capsys, "stats", "-g", f)
    assert code == 2 and "line 2" in err


def test_contract_exit_code(capsys):
    code, _, _ = run(capsys, "simulate", "misplacement", "--n", 10, "--n1", 10, "--delta", 0.05,
                     "--trials", 1, "--seed", 0)
    assert code == 4


def test_budget_exit_code(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"reviewers": ["a", "b", "c"], "papers": [str(i) for i in range(7)], "conflicts": []}))
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"params": None, "review_sets": {"a": [str(i) for i in range(7)],
                                                             "b": [str(i) for i in range(7)], "c": []}}))
    code, _, err = run(capsys, "check", "sp", "-g", g, "--assignment", a, "--rule", "borda", "--exhaustive",
                       "--budget", 1000)
    assert code == 5 and "budget" in err


def test_seed_required_for_sampling(capsys):
    code, _, _ = run(capsys, "check", "sp", "-g", SIX, "--assignment", GOLDEN / "assignment.json",
                     "--partition", GOLDEN / "partition.json", "--trials", 10)
    assert code == 4


def test_partition_assign_aggregate_chain(tmp_path, capsys):
    part, assign, rank = tmp_path / "p.json", tmp_path / "a.json", tmp_path / "r.json"
    assert run(capsys, "partition", "-g", SIX, "--mu", 2, "--lambda", 1, "-o", part)[0] == 0
    assert run(capsys, "assign", "-g", SIX, "--mu", 2, "--lambda", 1, "-o", assign)[0] == 0
    assert run(capsys, "aggregate", "-g", SIX, "--partition", part, "--profile", PROFILE, "-o", rank)[0] == 0
    assert rank.read_bytes() == (GOLDEN / "ranking.json").read_bytes()
    for prop in ("gu", "pu"):
        code, out, _ = run(capsys, "check", prop, "-g", SIX, "--assignment", assign, "--profile", PROFILE,
                           "--ranking", rank)
        assert code == 0 and json.loads(out)["verdict"] is True
    code, out, _ = run(capsys, "check", "sp", "-g", SIX, "--assignment", assign, "--partition", part, "--exhaustive")
    assert code == 0 and json.loads(out)["verdict"] is True


def test_verify_impossibility(capsys):
    code, out, _ = run(capsys, "verify-impossibility", "theorem7", "--n", 2, "--m", 2)
    rep = json.loads(out)
    assert code == 0 and (rep["num_rules"], rep["num_pu_rules"], rep["num_pu_and_wsp_rules"]) == (16, 4, 0)
    code, out, _ = run(capsys, "verify-impossibility", "chain")
    assert code == 0 and json.loads(out)["unsat"] is True


def test_simulate_deterministic(capsys):
    args = ("simulate", "misplacement", "--n", 300, "--n1", 120, "--delta", 0.05, "--trials", 200, "--seed", 9)
    a = run(capsys, *args)[1]
    b = run(capsys, *args)[1]
    assert a == b and json.loads(a)["violations"] == 0


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "strategyproof_review.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("stats", "prune", "partition", "assign", "aggregate", "check", "simulate",
                "verify-impossibility", "pipeline"):
        assert sub in proc.stdout
