import csv
import json
import subprocess
import sys

import pytest

from closedform.cli import main
from closedform.verify import ReportLine


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,want", [
    (["eval", "5 -. 7"], "0"),
    (["eval", "2^10"], "1024"),
    (["eval", "x*(y+1)", "x=3", "y=4"], "15"),
    (["eval", "gcd(10, 6) + hw(7)"], "5"),
])
def test_eval(capsys, argv, want):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == want


def test_eval_from_file(capsys, tmp_path):
    path = tmp_path / "t.term"
    path.write_text("2 ^ 3 ^ 2\n")
    code, out, _ = run(capsys, "eval", "--file", str(path))
    assert code == 0 and out.strip() == "512"


@pytest.mark.parametrize("argv", [["eval", "5 - 7"], ["eval", "x + 1"], ["eval", "x", "x=abc"], ["eval"]])
def test_eval_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize("n,method,want", [(50, "T", 10), (12, "U", 2), (10, "T", 2)])
def test_factor(capsys, n, method, want):
    code, out, _ = run(capsys, "factor", str(n), "--method", method, "--json")
    rep = json.loads(out)
    assert code == 0 and rep["divisor"] == want and rep["divisor"] * rep["cofactor"] == n


def test_factor_text(capsys):
    code, out, _ = run(capsys, "factor", "50")
    assert code == 0 and "divisor  10" in out and "root     7" in out


def test_factor_usage_errors(capsys):
    assert run(capsys, "factor", "1")[0] == 2
    assert run(capsys, "factor", "50", "--backend", "term")[0] == 2  # omega(50) over budget


def test_chi_omega(capsys):
    assert run(capsys, "chi", "50")[1].strip() == "5"
    assert run(capsys, "omega", "30")[1].strip() == "3"
    assert run(capsys, "omega", "10", "--backend", "term")[1].strip() == "2"


def test_emit(capsys):
    code, out, _ = run(capsys, "emit", "--formula", "delta")
    assert code == 0 and out.strip() == "(2 ^ b -. 1) * (2 ^ b -. a + 1)"
    code, out, _ = run(capsys, "emit", "--formula", "gcd", "a=10", "b=6", "--eval", "--stats")
    lines = out.strip().splitlines()
    assert lines[-1] == "value 2" and lines[1].startswith("node_count")
    code, out, _ = run(capsys, "emit", "--formula", "chi", "n=10", "--eval")
    assert out.strip().splitlines()[-1] == "value 1"
    code, out, _ = run(capsys, "emit", "--formula", "gseries", "--r", "2", "q=1", "t=5", "--eval")
    assert out.strip().splitlines()[-1] == "value 30"


def test_emit_errors(capsys):
    assert run(capsys, "emit", "--formula", "gseries", "--r", "3")[0] == 2
    assert run(capsys, "emit", "--formula", "gcd", "--eval")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["emit", "--formula", "nope"])
    assert info.value.code == 2


def test_count(capsys, tmp_path):
    spec = {"k": 1, "t": 6, "u": 4, "c0": 9, "monomials": [{"c": 1, "r": [2]}, {"c": -6, "r": [1]}]}
    assert run(capsys, "count", json.dumps(spec))[1].strip() == "1"
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    assert run(capsys, "count", str(path))[1].strip() == "1"
    bad = dict(spec, u=2)
    assert run(capsys, "count", json.dumps(bad))[0] == 2
    assert run(capsys, "count", "{not json")[0] == 2


def test_verify_jsonl(capsys):
    code, out, err = run(capsys, "verify", "--suite", "systems", "--range", "2..24", "--jsonl")
    assert code == 0
    fields = set(ReportLine.__dataclass_fields__)
    for line in out.strip().splitlines():
        record = json.loads(line)
        assert set(record) == fields
        assert record["ok"] == (record["expected"] == record["got"])
    assert "mismatched" in err


@pytest.mark.parametrize("suite,rng", [("chi", "1..60"), ("factor", "4..300"), ("witness", "1..20"),
                                       ("hypercube-random", "0..20"), ("binom", "1..12")])
def test_verify_suites_pass(capsys, suite, rng):
    assert run(capsys, "verify", "--suite", suite, "--range", rng)[0] == 0


def test_verify_mismatch_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "gcd", "--range", "1..2")
    assert code == 1 and "gcd(1,1)" in out


def test_verify_conjecture_suite_exits_zero(capsys):
    assert run(capsys, "verify", "--suite", "root-conjecture", "--range", "3..40")[0] == 0


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "--suite", "nope")[0] == 2


def test_verify_workers_keep_order(capsys):
    _, serial, _ = run(capsys, "verify", "--suite", "residues", "--range", "1..40", "--jsonl")
    _, pooled, _ = run(capsys, "verify", "--suite", "residues", "--range", "1..40", "--jsonl", "--workers", "2")
    strip = lambda text: [{k: v for k, v in json.loads(l).items() if k != "micros"} for l in text.splitlines()]
    assert strip(serial) == strip(pooled)


def test_bench(capsys, tmp_path):
    path = tmp_path / "bench.csv"
    code, out, _ = run(capsys, "bench", "--formula", "chi", "--min-n", "2", "--max-n", "12", "--csv", str(path))
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["n", "bits", "micros"]
    bits = {int(r[0]): int(r[1]) for r in rows[1:]}
    assert abs(bits[10] - 2800) <= 28
    assert out.splitlines()[1].split(",")[-1] == "1"  # chi(2)
    code, out, _ = run(capsys, "bench", "--formula", "omega", "--min-n", "5", "--max-n", "5")
    assert out.splitlines()[1].split(",")[-1] == "1"


def test_bench_capacity(capsys):
    assert run(capsys, "bench", "--formula", "omega", "--min-n", "30", "--max-n", "30")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "closedform", "factor", "10", "--json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["divisor"] == 2
