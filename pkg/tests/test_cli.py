from __future__ import annotations

import json

import pytest

from biprojapn.biproj import BiprojectivePair
from biprojapn.cli import main
from biprojapn.field import get_field


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_field_info(capsys):
    code, out, _ = run(capsys, "field-info", "--m", "6", "--k", "1", "--json")
    info = json.loads(out)
    assert code == 0
    assert info["poly"] == "0x43" and info["gcd_facts"]["q_plus_1"] == 3


def test_apn_check_family(capsys):
    code, out, _ = run(capsys, "apn-check", "--m", "5", "--family", "f1")
    assert code == 0 and "4 checked (both), 0 failing" in out
    code, out, _ = run(capsys, "apn-check", "--m", "4", "--family", "carlet", "--all-params", "--json")
    rows = json.loads(out)
    assert code == 0 and all(r["apn_projective"] and r["apn_naive"] for r in rows)


def test_apn_check_failure_exit_code(capsys):
    P = BiprojectivePair(get_field(3), 1, 1, (1, 0, 0, 0), (1, 0, 0, 0))
    code, out, _ = run(capsys, "apn-check", "--m", "3", "--pair", P.to_text())
    assert code == 1 and "NOT APN" in out
    code, out, _ = run(capsys, "apn-check", "--m", "3", "--pair", P.to_text(), "--csv")
    assert out.splitlines()[0] == "params,apn_projective,apn_naive,apn"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["apn-check", "--m", "5"])
    assert e.value.code == 2
    code, _, err = run(capsys, "apn-check", "--m", "5", "--instance", "f4:k=1,B=2,a=1")
    assert code == 2 and "m = 2 mod 4" in err
    code, _, err = run(capsys, "apn-check", "--m", "6", "--instance", "f4:k=1,B=1,a=1")
    assert code == 2 and "B non-cube" in err


def test_walsh(capsys):
    code, out, _ = run(capsys, "walsh", "--m", "3", "--family", "gold", "--json")
    data = json.loads(out)
    assert code == 0 and data["classical"]
    assert {v["abs_w"]: v["count"] for v in data["values"]} == {0: 1008, 8: 2688, 16: 336}


def test_equiv(capsys):
    code, out, _ = run(capsys, "equiv", "--m", "5", "--a", "f1:k=1", "--b", "F1(m=5 k=4)", "--json")
    data = json.loads(out)
    assert code == 0 and data["equivalent"] and data["verified"]
    code, out, _ = run(capsys, "equiv", "--m", "5", "--a", "f1:k=1", "--b", "f1:k=2")
    assert code == 0 and "inequivalent (coefficient-obstruction)" in out


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "--m", "3", "--poly-coeffs", "1,0,1,u", "--bfs", "--json")
    data = json.loads(out)
    assert code == 0
    assert (data["orbit"], data["stabilizer"], data["orbit_bfs"]) == (1176, 21, 1176)


def test_centralizer(capsys):
    code, out, _ = run(capsys, "centralizer", "--m", "5", "--family", "f1", "--k", "1", "--method", "both", "--json")
    data = json.loads(out)
    assert code == 0 and data["methods_agree"] and data["condition_c"]
    assert [r["index"] for r in data["reports"]] == [3, 3]
    with pytest.raises(SystemExit):
        main(["centralizer", "--m", "3", "--family", "gold"])


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--m", "5", "--family", "f1")
    assert code == 0 and "4 instances, 2 classes" in out
    code, out, _ = run(capsys, "enumerate", "--m", "5", "--family", "f1", "--csv")
    assert out.splitlines()[0] == "instance,class_id,joined_by"
    code, out, _ = run(capsys, "enumerate", "--m", "5", "--family", "f2", "--list")
    assert out.split("\n")[0] == "F2(m=5 k=1)"
    code, _, err = run(capsys, "enumerate", "--m", "5", "--family", "f4")
    assert code == 2


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--m", "5", "--families", "gold,f1,f2", "--json")
    data = json.loads(out)
    assert code == 0 and data["undecided_pairs"] == 0


def test_properties(capsys):
    code, out, _ = run(capsys, "properties", "--samples", "50", "--suite", "field", "--suite", "parseval")
    assert code == 0 and "FAIL" not in out and "PASS" in out
