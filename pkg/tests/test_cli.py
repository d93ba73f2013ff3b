import json
import subprocess
import sys

import pytest

from hilbgw import cli
from hilbgw.cli import main
from hilbgw.report import CheckReport


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dseries_expansion_line(capsys):
    code, out, _ = run(capsys, "dseries", "--n", "3", "--expand", "7")
    assert code == 0
    assert "(-5 - 7*q - q^2 + 2*q^3 - q^4 - 7*q^5 - 10*q^6 - 7*q^7 + O(q^8))" in out


def test_dseries_n1_is_zero(capsys):
    code, out, _ = run(capsys, "dseries", "--n", "1")
    assert code == 0 and out == "n=1: 0\n"


def test_json_schema_and_determinism(capsys):
    _, first, _ = run(capsys, "tables", "--n", "4", "--format", "json")
    _, second, _ = run(capsys, "tables", "--n", "4", "--format", "json")
    assert first == second
    doc = json.loads(first)
    assert set(doc) == {"command", "params", "results", "checks", "version"}
    assert doc["command"] == "tables" and doc["params"]["n"] == 4
    assert len(doc["results"]) == 5


def test_csv_output(capsys):
    code, out, _ = run(capsys, "hodge", "--g", "2", "--order", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "id,field,value"


def test_hodge_constant_term(capsys):
    code, out, _ = run(capsys, "hodge", "--g", "2", "--order", "5")
    assert code == 0 and out.startswith("g=2: 1/69120 + 1/288*Q")


def test_symfun_rewrite_args_and_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, "symfun", "rewrite", "--n", "3", "sum_i d[1]f_i")
    assert code == 0 and out == "sum_i d[1]f_i: -d[1]s1\n"
    monkeypatch.setattr(sys, "stdin", __import__("io").StringIO("f1*f2\n\n"))
    code, out, _ = run(capsys, "symfun", "rewrite", "--n", "2")
    assert code == 0 and out == "f1*f2: s2\n"


@pytest.mark.parametrize("argv", [
    ["symfun", "rewrite", "--n", "2", "d[1]f1"],
    ["symfun", "rewrite", "--n", "2", "f1 +"],
    ["dseries", "--n", "-1"],
    ["dseries", "--bogus"],
    ["nonsense"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_check_suite_passes(capsys):
    code, out, err = run(capsys, "check", "hodge", "--fast")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out
    assert "hodge" in err


def test_failed_check_exits_1(capsys, monkeypatch):
    def failing(name, args):
        def go():
            rep = CheckReport("forced")
            rep.record(False, "forced failure")
            return rep
        return [go]
    monkeypatch.setattr(cli, "_suite_runs", failing)
    code, out, _ = run(capsys, "check", "trace")
    assert code == 1 and "FAIL" in out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "d.json"
    code, out, _ = run(capsys, "dseries", "--n", "2", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["results"][0]["id"] == "n=2"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hilbgw", "trace", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("n=2")
