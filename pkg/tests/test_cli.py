import json
import subprocess
import sys

import pytest

from starcat import cli
from starcat.exact_linalg import QQ, Field


def run_json(capsys, *argv):
    code = cli.main(list(argv) + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_parse_field():
    assert cli.parse_field("rational") == QQ
    assert cli.parse_field("prime:101") == Field(101)
    assert cli.parse_field("GF(7)") == Field(7)
    assert cli.parse_field("p=13") == Field(13)
    for bad in ("prime:2", "prime:15", "reals"):
        with pytest.raises(Exception):
            cli.parse_field(bad)


def test_verify(capsys):
    code, rep = run_json(capsys, "verify", "--n", "2")
    assert code == 0
    assert rep == {"n": 2, "biideal_ok": True, "nilpotency_degree": 2, "dim_identity_ok": True,
                   "ev_cell_zero": True, "ev_defining_nonzero": True, "ok": True}


def test_homtable_star(capsys):
    code, rep = run_json(capsys, "homtable", "--n", "3")
    assert code == 0
    assert len(rep["rows"]) == 25
    table = {(r["source"], r["target"]): r["dim"] for r in rep["rows"]}
    assert table[("Reg", "Reg")] == 2
    assert table[("Reg", "F0")] == 2
    assert table[("Reg", "F2")] == 1


def test_homtable_zigzag_reports_published_column(capsys):
    code, rep = run_json(capsys, "homtable", "--n", "2", "--algebra", "zigzag")
    assert code == 0
    rows = {(r["source"], r["target"]): r for r in rep["rows"]}
    assert rows[("Reg", "Reg")]["dim"] == 4
    # the printed table says 2; the computed and expected value is 1
    assert rows[("Reg", "F1")]["dim"] == rows[("Reg", "F1")]["expected"] == 1
    assert rows[("Reg", "F1")]["published"] == 2
    assert rows[("Reg", "F0")]["dim"] == rows[("Reg", "F0")]["published"] == 2


def test_classify(capsys):
    code, rep = run_json(capsys, "classify", "--n", "2")
    assert code == 0
    assert rep["bell_number"] == 2 and len(rep["classes"]) == 2
    assert [c["label"] for c in rep["classes"]] == ["{0}{1,2}", "{0}{1}{2}"]
    assert rep["ok"] is True


def test_modcheck(capsys):
    code, rep = run_json(capsys, "modcheck", "--n", "2")
    assert code == 0
    assert rep["axiom_ok"] and rep["chi_ok"] and rep["scalar_proportionality_ok"]
    assert rep["perturbation"]["detected"]


def test_demos(capsys):
    code, rep = run_json(capsys, "demo", "counterexample")
    assert code == 0
    assert rep["distinct"] and not rep["saturated"] and len(rep["powers"]) == 10
    code, rep = run_json(capsys, "demo", "naturality")
    assert code == 0
    assert rep["witness"] == ["b1a1", "b1", "b1a1b2", "b2a2b2"]
    assert rep["final_remark_passes"] is False


def test_text_output(capsys):
    assert cli.main(["homtable", "--n", "1"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "Hom dimensions over star, n = 1"
    assert out.rstrip().endswith("status: ok")
    assert cli.main(["verify", "--n", "1"]) == 0
    assert "nilpotency_degree: 2" in capsys.readouterr().out


def test_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_verify", lambda n, field: {"n": n, "ok": False})
    assert cli.main(["verify", "--n", "1"]) == cli.EXIT_FAIL
    assert "status: FAILED" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [[], ["verify", "--n", "0"], ["verify", "--length-cap", "2"],
                                  ["verify", "--field", "prime:4"], ["demo", "nothing"],
                                  ["homtable", "--algebra", "other"]])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == cli.EXIT_USAGE


def test_json_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["classify", "--n", "3", "--json", str(a), "--parallelism", "2"])
    cli.main(["classify", "--n", "3", "--json", str(b), "--parallelism", "1"])
    capsys.readouterr()
    assert a.read_text() == b.read_text()
    rep = json.loads(a.read_text())
    assert len(rep["classes"]) == 5


def test_prime_field(capsys):
    code, rep = run_json(capsys, "verify", "--n", "2", "--field", "prime:101")
    assert code == 0 and rep["ok"]


def test_threads_environment(monkeypatch):
    monkeypatch.setenv("STARCAT_THREADS", "2")
    seen = {}

    def fake(n, field, par, cap):
        seen["par"] = par
        return {"ok": True}

    monkeypatch.setattr(cli, "run_classify", fake)
    args = cli.build_parser().parse_args(["classify", "--n", "1"])
    assert cli.run(args)[0] == 0
    assert seen["par"] == 2
    args = cli.build_parser().parse_args(["classify", "--n", "1", "--parallelism", "3"])
    cli.run(args)
    assert seen["par"] == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "starcat.cli", "demo", "naturality", "--format", "json"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["ok"] is True
