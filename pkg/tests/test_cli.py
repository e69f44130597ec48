import json
import subprocess
import sys

import pytest

from dblgpd.cli import EXIT_CAP, EXIT_INPUT, EXIT_MATH, EXIT_OK, main
from dblgpd.double import DoubleGroupoid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_verify_bundled_fixture(capsys):
    code, rep, err = run(capsys, "verify", "s3_factorization")
    assert code == EXIT_OK and rep["ok"]
    assert "passes" in err


def test_verify_broken_interchange_reports_witness(capsys):
    code, rep, _ = run(capsys, "verify", "broken_interchange")
    assert code == EXIT_MATH
    assert rep["first_failure"]["stage"] == "interchange"
    assert rep["first_failure"]["witness"] == [0, 1, 1, 0]


def test_input_errors(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert run(capsys, "verify", str(empty))[0] == EXIT_INPUT
    assert run(capsys, "verify", "no_such_thing")[0] == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", str(bad))[0] == EXIT_INPUT
    m = tmp_path / "m.txt"
    m.write_text(" ".join(["2", "0", "0", "0", "0", "1", "0", "0", "0", "0", "1", "0", "0", "0", "0", "1"]))
    assert run(capsys, "lorentz", "decompose", str(m))[0] == EXIT_INPUT
    m.write_text("1 2 3")
    assert run(capsys, "lorentz", "decompose", str(m))[0] == EXIT_INPUT


def test_non_group_table_is_math_failure(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"kind": "group", "order": 2, "mul": [[0, 1], [1, 1]]}))
    code, rep, _ = run(capsys, "verify", str(p))
    assert code == EXIT_MATH and rep["violations"]


def test_cap_exit(capsys):
    code, _, err = run(capsys, "enumerate", "--core", "cyclic:2", "--cap", "1")
    assert code == EXIT_CAP and "cap exceeded" in err


def test_enumerate_task_file(capsys):
    code, rep, _ = run(capsys, "enumerate", "--task", "z2_task", "--no-tables")
    assert code == EXIT_OK and rep["classes"] == 2


def test_case_study_z2(capsys):
    code, rep, err = run(capsys, "case-study", "z2-example")
    assert code == EXIT_OK and rep["classes"] == 2
    assert "classes: 2" in err


def test_case_study_spin(capsys):
    code, rep, _ = run(capsys, "case-study", "spin")
    assert code == EXIT_OK and rep["pairs"]["full_quotient_order"] == 288


def test_construct_gamma(capsys, tmp_path):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"kind": "gamma", "group": "cyclic:6", "H": [0, 3], "K": [0, 2, 4]}))
    code, rep, err = run(capsys, "construct", str(d))
    assert code == EXIT_OK and rep["squares"] == 6
    assert rep["predicates"]["vacant"]
    assert "vacant" in err


def test_construct_quadruple_fixture(capsys):
    code, rep, _ = run(capsys, "construct", "quadruple_z3")
    assert code == EXIT_OK and rep["squares"] == 12
    assert rep["section_is_double_functor"]


def test_construct_bad_kind(capsys, tmp_path):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"kind": "sigma", "group": "cyclic:2"}))
    assert run(capsys, "construct", str(d))[0] == EXIT_INPUT


def test_predicates_and_core_diagram(capsys):
    code, rep, _ = run(capsys, "predicates", "z2_example_extra")
    assert code == EXIT_OK and rep["maximal"] and rep["exclusive"]
    code, rep, _ = run(capsys, "core-diagram", "quadruple_z3")
    assert code == EXIT_OK and rep["exactness"]["ok"]


def test_decompose_groupoid(capsys):
    code, rep, _ = run(capsys, "decompose", "z3_coarse2")
    assert code == EXIT_OK and rep["components"]


def test_lorentz_decompose_and_check(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"matrix": [[1, 0, 0, 0], [0, 0, -1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]}))
    code, rep, _ = run(capsys, "lorentz", "decompose", str(m))
    assert code == EXIT_OK and rep["residual"] <= 1e-12
    code, rep, _ = run(capsys, "lorentz", "check", "--samples", "50", "--seed", "5")
    assert code == EXIT_OK and rep["samples"] == 50


def test_seeded_output_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["lorentz", "check", "--samples", "30", "--seed", "9", "-o", str(a)]) == EXIT_OK
    assert main(["lorentz", "check", "--samples", "30", "--seed", "9", "-o", str(b)]) == EXIT_OK
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_serialize_load_serialize(tmp_path, capsys):
    code, rep, _ = run(capsys, "construct", "quadruple_z3")
    first = rep["double_groupoid"]
    p = tmp_path / "dg.json"
    p.write_text(json.dumps(first))
    code, rep, _ = run(capsys, "verify", str(p))
    assert code == EXIT_OK
    assert DoubleGroupoid.from_dict(json.loads(p.read_text())).to_dict() == first


def test_console_script_module_entry():
    r = subprocess.run([sys.executable, "-m", "dblgpd.cli", "verify", "trivial"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["ok"]


@pytest.mark.parametrize("argv", [[], ["frobnicate"]])
def test_usage_errors_exit(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code != 0
