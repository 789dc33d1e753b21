import json

import pytest

from ramcycles import __version__
from ramcycles.cli import main
from ramcycles.report import COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_pretty(capsys):
    code, out, _ = run(capsys, "invariants", "--p", "3", "--germ", "z+z^2", "--nmax", "2")
    assert code == 0
    assert "verdict: MR" in out
    rows = [line.split() for line in out.splitlines()[4:]]
    assert [r[1] for r in rows] == ["1", "4", "13"]


def test_leading_minus_expression(capsys):
    code, out, _ = run(capsys, "invariants", "--p", "11", "--germ", "-1*z+z^2", "--nmax", "1",
                       "--trunc", "60", "--output", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["version"] == __version__
    assert doc["config"]["trunc"] == 60
    assert [e["value"] for e in doc["result"]["entries"]] == [2, 46]


def test_censored_entry_char2(capsys):
    code, out, _ = run(capsys, "invariants", "--p", "2", "--k", "4", "--germ", "x*z*(1+z^5)", "--trunc", "37",
                       "--output", "tsv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# ")
    assert lines[1].split("\t") == COLUMNS["invariants"]
    assert lines[3].split("\t")[1] == "15"
    assert lines[4].split("\t")[1:3] == [">=36", "censored"]


def test_json_is_deterministic(capsys):
    args = ("classify", "--p", "5", "--output", "json", "--sample", "3", "--seed", "7")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_classify_f7(capsys):
    code, out, _ = run(capsys, "classify", "--p", "7", "--output", "tsv")
    assert code == 0
    rows = {r.split("\t")[0]: r.split("\t") for r in out.splitlines()[2:]}
    cols = COLUMNS["classify"]
    mr = cols.index("mr")
    assert rows["1"][mr] == "true" and rows["2"][mr] == "false" and rows["4"][mr] == "true"
    assert all(r[cols.index("agree")] == "true" for r in rows.values())


def test_classify_jobs_keep_order(capsys):
    _, serial, _ = run(capsys, "classify", "--p", "11", "--output", "tsv")
    _, parallel, _ = run(capsys, "classify", "--p", "11", "--output", "tsv", "--jobs", "2")
    strip = lambda s: s.splitlines()[1:]  # the config line records --jobs implicitly
    assert strip(serial) == strip(parallel)
    minus_one = [r for r in strip(serial) if r.startswith("10\t")][0].split("\t")
    assert minus_one[COLUMNS["classify"].index("mr")] == "false"


def test_mr_and_order_mismatch(capsys):
    code, out, _ = run(capsys, "mr", "--p", "7", "--germ", "4*z+z^2", "--output", "json")
    assert code == 0 and json.loads(out)["result"]["mr"]["value"] is True
    code, _, err = run(capsys, "mr", "--p", "7", "--germ", "4*z+z^2", "--q", "6")
    assert code == 2 and "order" in err


def test_parse_error_exit(capsys):
    code, _, err = run(capsys, "invariants", "--p", "11", "--germ", "-1*z+*z^2")
    assert code == 2
    assert "^" in err


def test_usage_errors(capsys):
    assert run(capsys, "invariants", "--germ", "z+z^2")[0] == 2  # no --p
    assert run(capsys, "invariants", "--p", "9", "--germ", "z+z^2")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--p", "3", "--lambda", "1+t", "--q", "1", "--nmax", "4", "--output", "tsv")
    assert code == 0
    assert [r.split("\t")[2] for r in out.splitlines()[2:]] == ["1", "2/3", "2/3", "2/3", "2/3"]
    code, out, _ = run(capsys, "bound", "--p", "5", "--lambda", "padic:1+p", "--nmax", "2", "--output", "tsv")
    assert [r.split("\t")[2] for r in out.splitlines()[2:]] == ["1", "1/5", "1/25"]
    code, _, _ = run(capsys, "bound", "--p", "3", "--lambda", "1+t", "--nmax", "4", "--mode", "trunc",
                     "--tprec", "20")
    assert code == 3


def test_cycles(capsys):
    code, out, _ = run(capsys, "cycles", "--p", "3", "--map", "l*z*(1+z)", "--lambda", "1+t", "--mode", "exact",
                       "--output", "json", "--dump-iterate")
    assert code == 0
    doc = json.loads(out)
    assert [lv["verdict"] for lv in doc["result"]["levels"]] == ["Optimal"] * 3
    assert set(doc["result"]["iterates"]) == {"1", "3", "9"}
    code, out, _ = run(capsys, "cycles", "--p", "2", "--map", "l*z*(1+z^2)", "--lambda", "1+t")
    assert code == 0 and out.count("Concentration") == 2


def test_cycles_indeterminate_exit(capsys):
    code, _, _ = run(capsys, "cycles", "--p", "2", "--map", "l*z*(1+z^2)", "--lambda", "1+t", "--mode", "trunc",
                     "--tprec", "30")
    assert code == 3


def test_mu_warning(capsys):
    code, out, _ = run(capsys, "cycles", "--p", "2", "--map", "l*z*(1+mu*z+z^2)", "--lambda", "1+t", "--mu", "t")
    assert code == 0 and "warning: mu" in out


def test_appendix(capsys):
    code, out, _ = run(capsys, "appendix", "--p", "3", "--map", "l*z*(1+z)^3", "--lambda", "1+t", "--nmax", "2",
                       "--output", "tsv")
    assert code == 0
    assert [r.split("\t")[1] for r in out.splitlines()[2:]] == ["3", "9", "27"]


def test_resit_normalize_order(capsys):
    code, out, _ = run(capsys, "resit", "--p", "11", "--germ", "-1*z+z^2", "--output", "tsv")
    assert out.splitlines()[2].split("\t") == ["11", "2", "10", "10", "7", "0"]
    code, out, _ = run(capsys, "normalize", "--p", "11", "--germ", "-1*z+z^2", "--output", "json")
    assert json.loads(out)["result"]["trunc"] == 6
    code, out, _ = run(capsys, "order", "--p", "2", "--k", "4", "--elem", "x", "--output", "tsv")
    assert out.splitlines()[2].split("\t") == ["x", "5"]


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "1", "--only", "10")
    assert code == 0
    assert out.count("[PASS]") == 2
