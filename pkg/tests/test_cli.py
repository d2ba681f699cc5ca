import json
import subprocess
import sys

import pytest

from nlie import __version__, catalog, io
from nlie.cli import EXIT_FAIL, EXIT_IO, EXIT_PASS, EXIT_SCHEMA, EXIT_USAGE, main
from nlie.tensor import zeros


def run(capsys, *argv):
    code = main(["--format", "json", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def strip_timing(report):
    report = dict(report)
    report.pop("timing", None)
    return report


@pytest.fixture
def broken_alg(tmp_path):
    # A4 plus [e2, e3, e4] = e2 violates the Filippov-Jacobi identity
    doc = {
        "format": "nlie/1",
        "algebras": [{
            "name": "broken", "arity": 3, "dim": 4,
            "brackets": [
                {"indices": [1, 2, 3], "value": [{"basis": 4, "coeff": "1"}]},
                {"indices": [2, 3, 4], "value": [{"basis": 2, "coeff": "1"}]},
            ],
        }],
    }
    p = tmp_path / "broken.alg"
    p.write_text(json.dumps(doc))
    return p


def test_check_algebra_pass(capsys):
    code, rep = run(capsys, "check-algebra", "catalog:A4")
    assert code == EXIT_PASS
    assert rep["result"] == "pass"
    assert rep["tool"] == "nlie" and rep["version"] == __version__
    assert rep["report"]["details"]["filippov-jacobi"]["verdict"] == "pass"
    assert rep["inputs"][0]["uri"] == "catalog:A4"
    assert len(rep["inputs"][0]["sha256"]) == 64


def test_broken_algebra_exits_1_with_counterexample(capsys, broken_alg):
    code, rep = run(capsys, "check-algebra", str(broken_alg))
    assert code == EXIT_FAIL
    fji = rep["report"]["details"]["filippov-jacobi"]
    assert fji["verdict"] == "fail"
    assert fji["counterexample"]["where"]
    assert fji["counterexample"]["residual"]


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE


def test_bad_flag_is_usage_error(capsys):
    assert main(["check-rep", "catalog:A4", "--rep", "nonsense"]) == EXIT_USAGE


def test_wrong_kind_is_usage_error(capsys):
    assert main(["check-bialgebra", "catalog:A4"]) == EXIT_USAGE


def test_missing_file_is_io_error(capsys, tmp_path):
    assert main(["check-algebra", str(tmp_path / "absent.json")]) == EXIT_IO


def test_unknown_catalog_name_is_io_error(capsys):
    assert main(["check-algebra", "catalog:nope"]) == EXIT_IO
    assert "A4" in capsys.readouterr().err


def test_schema_violation_exit_4(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({
        "format": "nlie/1",
        "algebras": [{"name": "x", "arity": 3, "dim": 4,
                      "brackets": [{"indices": [2, 1, 3], "value": [{"basis": 4, "coeff": "1"}]}]}],
    }))
    assert main(["check-algebra", str(p)]) == EXIT_SCHEMA
    assert "not strictly increasing" in capsys.readouterr().err
    p.write_text("{oops")
    assert main(["check-algebra", str(p)]) == EXIT_SCHEMA


@pytest.mark.parametrize(
    "argv",
    [
        ["check-rep", "catalog:A4", "--rep", "coadjoint"],
        ["check-rep", "catalog:sl2", "--rep", "tensor-power", "--power", "2"],
        ["check-bialgebra", "catalog:wedge-abelian"],
        ["check-operad", "catalog:heisenberg-dc"],
        ["check-operad", "catalog:heisenberg-dc", "--row", "1"],
        ["check-local-cocycle", "catalog:zero:A4", "catalog:zero:A4", "catalog:zero:A4"],
        ["check-double-construction", "catalog:heisenberg-dc"],
        ["double", "catalog:zero:sl2"],
        ["dual", "catalog:wedge-abelian"],
        ["check-manin", "catalog:double:wedge-abelian"],
        ["theorem", "catalog:wedge-abelian"],
        ["cohomology", "catalog:heisenberg", "--degree", "2"],
    ],
)
def test_subcommands_pass(capsys, argv):
    code, rep = run(capsys, *argv)
    assert code == EXIT_PASS, rep
    assert rep["command"] == argv[0]


def test_theorem_converse_counterexample_exits_1(capsys):
    code, _ = run(capsys, "theorem", "catalog:A4-wedge-e1")
    assert code == EXIT_FAIL


def test_reports_deterministic(capsys):
    argv = ["--seed", "17", "check-rep", "catalog:A4", "--rep", "adjoint"]
    code1, a = run(capsys, *argv)
    code2, b = run(capsys, *argv)
    assert code1 == code2 == EXIT_PASS
    assert a["seed"] == 17
    assert strip_timing(a) == strip_timing(b)


def test_seed_absent_for_unseeded_commands(capsys):
    _, rep = run(capsys, "check-algebra", "catalog:sl2")
    assert rep["seed"] is None


def test_report_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["--format", "json", "--report", str(out), "check-algebra", "catalog:so3"]) == EXIT_PASS
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["result"] == "pass"


def test_text_format(capsys):
    assert main(["check-algebra", "catalog:A4"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "PASS filippov-jacobi" in out and "result: pass" in out


def test_file_input_and_dual_output(capsys, tmp_path):
    src = tmp_path / "wedge.json"
    src.write_text(io.emit_cobracket(catalog.cobracket("wedge-abelian")))
    dest = tmp_path / "dual.json"
    assert main(["dual", str(src), "--output", str(dest)]) == EXIT_PASS
    dual = io.parse_cobracket(dest.read_text())
    assert (dual.algebra.tensor == catalog.algebra("A4").tensor).all()


def test_double_output_is_manin_triple(capsys, tmp_path):
    dest = tmp_path / "double.json"
    assert main(["double", "catalog:heisenberg-dc", "--output", str(dest)]) == EXIT_PASS
    capsys.readouterr()
    assert main(["check-manin", str(dest)]) == EXIT_PASS


def test_ambiguous_file_needs_fragment(capsys, tmp_path):
    p = tmp_path / "two.json"
    p.write_text(io.emit_document([catalog.algebra("A4"), catalog.algebra("sl2")]))
    assert main(["check-algebra", str(p)]) == EXIT_USAGE
    assert main(["check-algebra", f"{p}#sl2"]) == EXIT_PASS


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nlie", "check-algebra", "catalog:heisenberg"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "result: pass" in proc.stdout
