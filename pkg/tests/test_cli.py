import json
import subprocess
import sys
from pathlib import Path

import pydot
import pytest

from arknit.cli import EXIT_BUDGET, EXIT_CHECK, EXIT_INPUT, EXIT_OK, main, parse_window
from arknit.documents import ReportDocument

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fx(name):
    return str(FIXTURES / name)


def test_window_parsing():
    assert parse_window("4") == (-4, 4)
    assert parse_window("-2,3") == (-2, 3)
    with pytest.raises(Exception):
        parse_window("3,1")


def test_analyze_field(tmp_path, capsys):
    out = tmp_path / "field.json"
    assert main(["analyze", fx("field_f5.json"), "--out", str(out)]) == EXIT_OK
    report = ReportDocument.from_json(out.read_text())
    assert report.verdict == "Simple_A1"
    assert all(t.middle_parts == [] and t.verified for t in report.triangles)
    assert "Simple_A1" in capsys.readouterr().err


def test_analyze_a3_json_and_dot(tmp_path):
    out = tmp_path / "a3.out"
    code = main(["analyze", fx("a3.json"), "--emit", "dot", "--emit", "json", "--out", str(out), "--window", "2"])
    assert code == EXIT_OK
    report = json.loads((tmp_path / "a3.json").read_text())
    assert report["verdict"] == "FiniteType_Dynkin(A3)"
    assert "derived equivalent to kA3" in report["note"]
    assert report["components"][0]["nodes_in_window"] == 30
    assert pydot.graph_from_dot_data((tmp_path / "a3.dot").read_text())


def test_analyze_dual_numbers_budget(tmp_path):
    out = tmp_path / "dn.json"
    code = main(["analyze", fx("dual_numbers_f3.json"), "--budget", "5", "--window", "2", "--out", str(out)])
    assert code == EXIT_BUDGET
    report = ReportDocument.from_json(out.read_text())
    assert report.verdict == "InfiniteOrInconclusive"
    assert report.evidence["candidate_tree"] == "A_infinity"
    assert all(t.tau == [t.rep, -1] for t in report.triangles)


@pytest.mark.parametrize("doc", [
    {"characteristic": 4, "vertices": ["1"], "arrows": []},
    {"characteristic": 5, "vertices": ["1"], "arrows": [], "colour": "red"},
    {"characteristic": 5, "vertices": ["1"], "arrows": [{"name": "a", "from": "1", "to": "2"}]},
    {"characteristic": 5, "vertices": ["1", "2"], "arrows": [{"name": "a", "from": "1", "to": "2"}],
     "relations": [[{"coeff": 1, "path": ["a"]}]]},
])
def test_analyze_input_errors(tmp_path, capsys, doc):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(doc))
    assert main(["analyze", str(f)]) == EXIT_INPUT
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("error:")


def test_missing_file(capsys):
    assert main(["analyze", "/nonexistent/algebra.json"]) == EXIT_INPUT


def test_bad_arguments():
    assert main(["analyze"]) == EXIT_INPUT
    assert main(["frobnicate"]) == EXIT_INPUT


def test_mesh_e8(capsys):
    assert main(["mesh", "--tree", "E8", "--check-identities", "--rows", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS [cited] x_{1,j+15} = -x_{1,j}" in out


def test_mesh_e7_reports_failure(capsys):
    assert main(["mesh", "--tree", "E7", "--check-identities", "--rows", "1"]) == EXIT_CHECK
    out = capsys.readouterr().out
    assert "FAIL [cited] x_{3,j+20} = -x_{3,j} + x_{4,j}" in out


def test_mesh_positivity(capsys):
    assert main(["mesh", "--tree", "A2", "--init", "1,1", "--certify-positivity"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "witness: column j+1, vertex 1, value 0" in out


def test_mesh_single_vertex(capsys):
    assert main(["mesh", "--tree", "A1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "no meshes" in out and "j+1" not in out


def test_mesh_single_vertex_has_no_certificate():
    assert main(["mesh", "--tree", "A1", "--init", "3", "--certify-positivity"]) == EXIT_CHECK


@pytest.mark.parametrize("args", [
    ["--tree", "A2", "--init", "1,x"],
    ["--tree", "A2", "--init", "1,2,3"],
    ["--tree", "A2", "--init", "0,1", "--certify-positivity"],
    ["--tree", "A2", "--certify-positivity"],
    ["--tree", "F4"],
    ["--tree", "A2", "--rows", "0"],
])
def test_mesh_input_errors(args):
    assert main(["mesh", *args]) == EXIT_INPUT


def test_hom_field(capsys):
    assert main(["hom", fx("field_f5.json"), fx("a2_stalk_p1.json"), fx("a2_stalk_p1.json")]) == EXIT_OK
    assert capsys.readouterr().out.split() == ["chain", "maps:", "1", "null-homotopic:", "0", "Hom_K:", "1"]


def test_hom_a2(capsys):
    assert main(["hom", fx("a2.json"), fx("a2_stalk_p2.json"), fx("a2_stalk_p1.json")]) == EXIT_OK
    assert "Hom_K: 1" in capsys.readouterr().out
    assert main(["hom", fx("a2.json"), fx("a2_stalk_p1.json"), fx("a2_stalk_p2.json")]) == EXIT_OK
    assert "Hom_K: 0" in capsys.readouterr().out


def test_hom_from_contractible(capsys):
    for y in ("a2_stalk_p1.json", "a2_p2_to_p1.json", "a2_cone_id_p1.json"):
        assert main(["hom", fx("a2.json"), fx("a2_cone_id_p1.json"), fx(y)]) == EXIT_OK
        assert "Hom_K: 0" in capsys.readouterr().out


def test_hom_rejects_bad_complexes(tmp_path):
    notcx = tmp_path / "dd.json"
    notcx.write_text(json.dumps({
        "degrees": {"0": ["1"], "1": ["1"], "2": ["1"]},
        "differentials": {"0": [[[{"coeff": 1, "vertex": "1"}]]], "1": [[[{"coeff": 1, "vertex": "1"}]]]},
    }))
    assert main(["hom", fx("a2.json"), str(notcx), fx("a2_stalk_p1.json")]) == EXIT_INPUT
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"degrees": {"0": ["3"]}}))
    assert main(["hom", fx("a2.json"), str(unknown), fx("a2_stalk_p1.json")]) == EXIT_INPUT


def test_console_exit_codes():
    run = [sys.executable, "-m", "arknit.cli"]
    ok = subprocess.run(run + ["mesh", "--tree", "E6", "--check-identities"], capture_output=True)
    bad = subprocess.run(run + ["mesh", "--tree", "E7", "--check-identities"], capture_output=True)
    err = subprocess.run(run + ["mesh", "--tree", "Q1"], capture_output=True)
    assert (ok.returncode, bad.returncode, err.returncode) == (EXIT_OK, EXIT_CHECK, EXIT_INPUT)
