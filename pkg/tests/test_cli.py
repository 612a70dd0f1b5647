import json
import subprocess
import sys

import pytest

from posetturan.cli import infer_k, main, parse_audit_tsv
from posetturan.constructions import middle_levels
from posetturan.lattice import Family, format_family, read_family, write_family


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def tsv_rows(text):
    lines = text.strip().split("\n")
    keys = lines[0].split("\t")
    return [dict(zip(keys, ln.split("\t"))) for ln in lines[1:]]


def fam_file(tmp_path, fam, name="f.txt"):
    path = tmp_path / name
    write_family(fam, path)
    return str(path)


def test_extremal_theorem1(capsys):
    code, out = run(["extremal", "--n", "3", "--forbid", "Y:2,2", "--forbid", "Y':2,2", "--mode", "induced"], capsys)
    row = tsv_rows(out)[0]
    assert code == 0 and row["optimum"] == "6" and row["sigma"] == "6" and row["exhaustive"] == "true"


def test_extremal_weak_chain(capsys, tmp_path):
    wpath = tmp_path / "w.txt"
    code, out = run(["extremal", "--n", "4", "--forbid", "P:3", "--mode", "weak",
                     "--witness-out", str(wpath), "--format", "json"], capsys)
    row = json.loads(out)[0]
    assert code == 0 and row["optimum"] == 10 and row["witness"] == str(wpath)
    assert len(read_family(wpath)) == 10


def test_extremal_n1(capsys):
    code, out = run(["extremal", "--n", "1", "--forbid", "P:2", "--mode", "weak"], capsys)
    assert code == 0 and tsv_rows(out)[0]["optimum"] == "1"


def test_extremal_mode_suffix_and_parallel(capsys):
    code, out = run(["extremal", "--n", "4", "--forbid", "B@weak", "--parallel", "2"], capsys)
    assert code == 0 and tsv_rows(out)[0]["optimum"] == "10"


def test_extremal_budget_exit(capsys):
    code, out = run(["extremal", "--n", "4", "--forbid", "Y:2,2", "--forbid", "Y':2,2", "--budget", "10"], capsys)
    assert code == 3 and tsv_rows(out)[0]["exhaustive"] == "false"


def test_extremal_lym_prune(capsys):
    code, out = run(["extremal", "--n", "4", "--forbid", "Y:2,2", "--forbid", "Y':2,2", "--lym-prune"], capsys)
    row = tsv_rows(out)[0]
    assert code == 0 and row["optimum"] == "10" and row["exhaustive"] == "false"
    code, _ = run(["extremal", "--n", "4", "--forbid", "B", "--lym-prune"], capsys)
    assert code == 2


def test_usage_errors(capsys):
    assert main(["extremal", "--n", "3", "--forbid", "Q:1"]) == 2
    assert main(["extremal", "--n", "3", "--forbid", "B@strong"]) == 2
    assert main(["check", "--family", "/nonexistent/x", "--pattern", "B"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["extremal", "--n", "3", "--forbid", "B", "--bogus"])
    assert exc.value.code == 2


def test_check(capsys, tmp_path):
    f0 = fam_file(tmp_path, Family.of(4, [{1}, {2}, {1, 2, 3}, {1, 2, 4}]))
    code, out = run(["check", "--family", f0, "--pattern", "B@weak", "--pattern", "Y:2,2@induced",
                     "--pattern", "Y':2,2"], capsys)
    rows = tsv_rows(out)
    assert code == 0
    assert [r["present"] for r in rows] == ["true", "false", "false"]
    empty = fam_file(tmp_path, Family.of(4), "e.txt")
    _, out = run(["check", "--family", empty, "--pattern", "B", "--pattern", "D2@weak"], capsys)
    assert all(r["present"] == "false" for r in tsv_rows(out))
    mid = fam_file(tmp_path, middle_levels(4, 2), "m.txt")
    _, out = run(["check", "--family", mid, "--pattern", "Y:2,2"], capsys)
    assert tsv_rows(out)[0]["present"] == "false"


def test_check_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("n=3\n2,1\n")
    assert main(["check", "--family", str(bad), "--pattern", "B"]) == 2


def test_audit_levels(capsys, tmp_path):
    path = fam_file(tmp_path, middle_levels(3, 2))
    code, out = run(["audit", "--family", path, "--k", "2"], capsys)
    doc = parse_audit_tsv(out)
    assert code == 0
    assert doc["summary"]["all_ok"] is True
    assert doc["summary"]["lym_lhs"] == doc["summary"]["lym_rhs"] == 12
    assert all(r["ok"] for r in doc["spines"])


def test_audit_chain_family(capsys, tmp_path):
    path = fam_file(tmp_path, Family.of(4, [{1}, {1, 2}, {1, 2, 3}]))
    code, out = run(["audit", "--family", path, "--k", "2"], capsys)
    doc = parse_audit_tsv(out)
    assert code == 0
    assert [r["direct_sum"] for r in doc["spines"]][:2] == [-3, 0]
    assert all(r["direct_sum"] <= 0 for r in doc["spines"])


def test_audit_full_set_warning(capsys, tmp_path):
    path = fam_file(tmp_path, middle_levels(3, 2).with_sets(7))
    code, out = run(["audit", "--family", path, "--k", "2"], capsys)
    doc = parse_audit_tsv(out)
    assert code == 0
    assert any("∅,[n] ∉ F" in w for w in doc["warnings"])


def test_audit_resource_bound(capsys, tmp_path):
    path = fam_file(tmp_path, Family.of(9, [{1}]))
    assert main(["audit", "--family", path, "--k", "2"]) == 3


@pytest.mark.parametrize("fam", [
    middle_levels(3, 2),
    Family.of(4, [{1}, {1, 2}, {1, 2, 3}, {1, 2, 4}]),
    middle_levels(4, 3).with_sets(0),
])
def test_audit_tsv_and_json_agree(capsys, tmp_path, fam):
    path = fam_file(tmp_path, fam)
    _, tsv = run(["audit", "--family", path, "--k", "2"], capsys)
    _, js = run(["audit", "--family", path, "--k", "2", "--format", "json"], capsys)
    doc = json.loads(js)
    parsed = parse_audit_tsv(tsv)
    for key in ("spines", "summary", "warnings", "violations"):
        assert parsed[key] == doc[key]


def test_rows_tsv_json_agree(capsys):
    _, tsv = run(["conjecture", "--k-range", "2", "--r-range", "2-3", "--n-range", "3"], capsys)
    _, js = run(["conjecture", "--k-range", "2", "--r-range", "2-3", "--n-range", "3", "--format", "json"], capsys)
    rows = json.loads(js)
    assert [{k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in r.items()} for r in rows] == tsv_rows(tsv)


def test_lym_subcommand(capsys, tmp_path):
    path = fam_file(tmp_path, middle_levels(3, 2))
    code, out = run(["lym", "--family", path, "--k", "2"], capsys)
    row = tsv_rows(out)[0]
    assert code == 0 and row["holds"] == "true" and row["equality"] == "true"


@pytest.mark.parametrize("argv,size", [
    (["construct", "middle", "--n", "4", "--k", "2"], 10),
    (["construct", "equality", "--n", "4", "--k", "2", "--use-top"], 10),
    (["construct", "levels", "--n", "4", "--levels", "0,4"], 2),
    (["construct", "levels", "--n", "4"], 0),
    (["construct", "middle", "--n", "5", "--k", "2", "--add-empty"], 21),
])
def test_construct_roundtrip(capsys, tmp_path, argv, size):
    out_path = tmp_path / "c.txt"
    assert main(argv + ["--out", str(out_path)]) == 0
    fam = read_family(out_path)
    assert len(fam) == size
    assert out_path.read_text() == format_family(fam)


def test_construct_random_seeded(capsys):
    _, a = run(["construct", "random", "--n", "4", "--seed", "7"], capsys)
    _, b = run(["construct", "random", "--n", "4", "--seed", "7"], capsys)
    assert a == b


def test_construct_errors(capsys):
    assert main(["construct", "middle", "--n", "4"]) == 2
    assert main(["construct", "equality", "--n", "5", "--k", "2"]) == 2


def test_conjecture(capsys):
    code, out = run(["conjecture", "--k-range", "2-3", "--r-range", "2", "--n-range", "3-4"], capsys)
    rows = {(r["k"], r["r"], r["n"]): r for r in tsv_rows(out)}
    assert code == 0
    assert rows[("2", "2", "3")]["consistent"] == "true"
    assert rows[("3", "2", "4")]["optimum"] == "14" and rows[("3", "2", "4")]["consistent"] == "true"
    assert all(int(r["optimum"]) >= int(r["sigma"]) for r in rows.values())


def test_moreempty(capsys):
    code, out = run(["moreempty", "--n", "3", "--g", "1,2"], capsys)
    row = tsv_rows(out)[0]
    assert code == 0 and (row["avoiding"], row["hitting"], row["injection_ok"]) == ("3", "3", "true")
    assert main(["moreempty", "--n", "3", "--g", "3"]) == 2


def test_infer_k():
    assert infer_k(["Y:3,2", "Y':3,2"]) == 3
    assert infer_k(["P:3@weak"]) == 2
    assert infer_k(["B"]) is None


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "posetturan", "moreempty", "--n", "2", "--g", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert tsv_rows(proc.stdout)[0]["hitting"] == "1"
