import csv
import io
import json

import pytest

from supercong import report
from supercong.cli import RunConfig, UsageError, main, parse_range


@pytest.fixture
def run(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SUPERCONG_CACHE_DIR", str(tmp_path / "cache"))

    def _run(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def test_parse_range():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("-3..-1,7") == [-3, -2, -1, 7]
    assert parse_range("5") == [5]
    for bad in ("3..1", "a..b", ""):
        with pytest.raises(Exception):
            parse_range(bad)


def test_run_config_invariants(tmp_path):
    with pytest.raises(UsageError):
        RunConfig(tmp_path, jobs=0)
    with pytest.raises(UsageError):
        RunConfig(tmp_path, budget_max_index=0)


def test_seq_outputs(run):
    code, out, _ = run("seq", "apery", "--upto", "4")
    assert code == 0 and out.splitlines()[-1] == "4\t33001"
    code, out, _ = run("seq", "franel", "--upto", "1")
    assert out.splitlines() == ["0\t1", "1\t2"]
    code, out, _ = run("seq", "bernoulli", "--upto", "3")
    assert out.splitlines()[-1] == "3\t0/1"
    code, out, _ = run("seq", "s1", "--upto", "2", "--x", "0")
    assert out.splitlines() == ["1\t1", "2\t4"]
    code, out, _ = run("seq", "t", "--upto", "5")
    assert out.splitlines()[-1] == "5\t4300"


def test_seq_populates_cache(run, tmp_path):
    run("seq", "s3", "--upto", "5")
    assert (tmp_path / "cache" / "s3.v1.tsv").exists()
    other = tmp_path / "other"
    run("--cache-dir", str(other), "seq", "apery", "--upto", "2")
    assert (other / "apery.v1.tsv").exists()
    run("seq", "franel", "--upto", "2", "--cache-dir", str(other))
    assert (other / "franel.v1.tsv").exists()


def test_seq_bad_arguments(run):
    assert run("seq", "nope", "--upto", "3")[0] == 2
    assert run("seq", "apery", "--upto", "-1")[0] == 2
    assert run("seq", "franel", "--upto", "3", "--x", "2")[0] == 2
    assert run("--budget", "10", "seq", "apery", "--upto", "11")[0] == 4


def test_seq_corrupt_cache_exit_3(run, tmp_path):
    run("seq", "apery", "--upto", "4")
    path = tmp_path / "cache" / "apery.v1.tsv"
    path.write_text(path.read_text().replace("2\t73", "2\tseventy"))
    assert run("seq", "apery", "--upto", "6")[0] == 3


def test_verify_thm2_json(run):
    code, out, _ = run("verify", "thm2", "--primes", "2..13", "--n", "1..6")
    assert code == 0
    rep = json.loads(out)
    assert rep["summary"]["passed"] == rep["summary"]["total"] == 36
    assert set(rep) == {"tool_version", "generated_at", "cases", "summary"}
    assert rep["generated_at"].endswith("Z")
    keys = {"check_id", "params", "required_exponent", "achieved_valuation",
            "integrality_ok", "holds", "witness"}
    assert keys <= set(rep["cases"][0])
    assert rep["cases"] == sorted(rep["cases"], key=report.sort_key)


def test_verify_json_round_trip(run):
    code, out, _ = run("--no-timestamp", "verify", "guo-p5")
    assert code == 0
    assert report.to_json(json.loads(out)) == out


def test_verify_jacobsthal_negative_range(run):
    code, out, _ = run("verify", "lemma:jacobsthal", "--primes", "2..7", "--r", "1..2",
                       "--s", "1..2", "--a", "-3..3", "--b", "1..2")
    assert code == 0
    rep = json.loads(out)
    assert {c["params"]["a"] for c in rep["cases"]} == set(range(-3, 4))
    assert rep["summary"]["failed"] == 0 and rep["summary"]["degenerate"] > 0


def test_verify_precondition_and_bad_target(run):
    assert run("verify", "thm1a", "--primes", "3..3", "--n", "1..2")[0] == 2
    assert run("verify", "thm9")[0] == 2
    assert run("verify", "lemma:nope")[0] == 2
    assert run("verify", "identity:nope")[0] == 2
    assert run("verify", "thm2", "--primes", "8..10")[0] == 2
    assert run("verify", "thm2", "--n", "0..2")[0] == 2
    assert run("--jobs", "0", "verify", "thm2")[0] == 2


def test_verify_budget_exit_4(run):
    code, _, err = run("verify", "thm1a", "--primes", "31..31", "--n", "1",
                       "--include-ppowers", "2", "--budget", "1000")
    assert code == 4 and "budget" in err


def test_include_ppowers(run):
    code, out, _ = run("verify", "thm1b", "--primes", "5..7", "--n", "1..2", "--include-ppowers", "2")
    ns = sorted({(c["params"]["p"], c["params"]["n"]) for c in json.loads(out)["cases"]})
    assert ns == [(5, 1), (5, 2), (5, 5), (5, 10), (5, 25), (7, 1), (7, 2), (7, 7), (7, 14), (7, 49)]


def test_csv_and_table(run):
    code, out, _ = run("--format", "csv", "verify", "sun-p5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["p"] for r in rows] == ["5", "7", "11", "13"]
    assert rows[0]["status"] == "pass" and rows[0]["witness"] == "11065625/36"
    code, out, _ = run("verify", "identity:guo-zeng", "--n", "1..3", "--format", "table")
    assert code == 0 and out.splitlines()[-1].startswith("total 3  passed 3")


def test_failing_case_exit_1(run, monkeypatch):
    from supercong import theorems
    from supercong.theorems import CongruenceCase

    def broken(n):
        return CongruenceCase("guo-n2", {"n": n}, None, None, False, 1)

    monkeypatch.setitem(theorems.THEOREM_CHECKS, "guo-n2", broken)
    code, out, _ = run("verify", "guo-n2", "--n", "1..2")
    assert code == 1 and json.loads(out)["summary"]["failed"] == 2


def test_jobs_determinism(run):
    args = ("--no-timestamp", "verify", "thm2", "--primes", "2..7", "--n", "1..5")
    a = run("--jobs", "1", *args)
    b = run("--jobs", "3", *args)
    assert a[0] == b[0] == 0 and a[1] == b[1]


def test_estimate(run):
    code, out, _ = run("estimate", "thm1a", "--p", "5", "--base", "1", "--max-r", "1")
    prof = json.loads(out)
    assert code == 0 and [r["n"] for r in prof["rows"]] == [1, 5]
    assert prof["fitted"]["intercept"] == 4
    code, out, _ = run("estimate", "thm2", "--p", "2", "--base", "1", "--max-r", "1")
    rows = [(r["n"], r["nu_p_n"], r["achieved_valuation"]) for r in json.loads(out)["rows"]]
    assert rows == [(1, 0, 4), (2, 1, 6)]
    code, out, _ = run("estimate", "thm1b", "--p", "5", "--base", "1", "--max-r", "0")
    assert [r["achieved_valuation"] for r in json.loads(out)["rows"]] == [6]
    assert run("estimate", "thm1a", "--p", "3", "--base", "1")[0] == 2
    assert run("--budget", "100", "estimate", "thm1a", "--p", "5", "--max-r", "3")[0] == 4


def test_cache_subcommands(run, tmp_path):
    run("seq", "apery", "--upto", "6")
    run("seq", "apery-poly", "--upto", "3", "--x", "-2")
    code, out, _ = run("cache", "inspect")
    files = {f["kind"]: f["count"] for f in json.loads(out)["files"]}
    assert files == {"apery": 7, "apery-poly[x=-2]": 4}
    assert run("cache", "verify")[0] == 0

    path = tmp_path / "cache" / "apery.v1.tsv"
    path.write_text(path.read_text().replace("\t1445\n", "\t1446\n"))
    assert run("cache", "verify")[0] == 3
    assert run("--verify-cache", "seq", "apery", "--upto", "3")[0] == 3
    assert run("seq", "apery", "--upto", "3")[0] == 0

    code, out, _ = run("cache", "clear")
    assert code == 0 and not list((tmp_path / "cache").glob("*.tsv"))
