import json

import pytest

from src.app.main import main


def run(capsys, *argv):
    """Run the command line and capture what it prints."""
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_validate_simplex(capsys):
    """Test validating a builtin simplex."""
    code, out = run(capsys, "sset", "validate", "simplex:2")
    assert code == 0
    assert json.loads(out)["counts"] == [3, 3, 1]


def test_iso_of_horn_and_spine(capsys):
    """Test that the middle horn of Delta^2 is its spine."""
    code, out = run(capsys, "sset", "iso", "horn:2:1", "spine:2")
    assert code == 0
    assert json.loads(out) == {"isomorphic": True}


def test_show_dot(capsys):
    """Test the DOT rendering of a boundary."""
    code, out = run(capsys, "sset", "show", "boundary:2", "--format", "dot")
    assert code == 0
    assert out.count("->") == 3


def test_invalid_horn_reports_error(capsys):
    """Test the error document for an out of range horn."""
    code, out = run(capsys, "sset", "show", "horn:2:3")
    assert code == 1
    payload = json.loads(out)
    assert payload["status"] == "error"
    assert payload["error"]["code"] == "INVALID_SIMPLICIAL_DATA"


def test_unknown_builder_reports_schema_error(capsys):
    """Test the error document for an unknown builtin."""
    code, out = run(capsys, "sset", "show", "cube:3")
    assert code == 1
    assert json.loads(out)["error"]["code"] == "SCHEMA_VALIDATION"


def test_search_and_verify(capsys, tmp_path):
    """Test searching a spine certificate, writing it and replaying it."""
    path = tmp_path / "spine.json"
    code, out = run(capsys, "anodyne", "search", "spine:3", "--out", str(path))
    assert code == 0
    assert json.loads(out)["status"] == "found"
    assert path.exists()
    code, out = run(capsys, "anodyne", "verify", str(path))
    assert code == 0
    assert json.loads(out)["accepted"] is True


def test_search_boundary_reports_witness(capsys):
    """Test that a failed inner search names a lifting witness."""
    code, out = run(capsys, "anodyne", "search", "boundary:2")
    payload = json.loads(out)
    assert code == 0
    assert payload["status"] == "none"
    assert "witness" in payload


def test_kan_check(capsys):
    """Test that Delta^1 is reported as not Kan."""
    code, out = run(capsys, "anodyne", "kan", "simplex:1")
    assert code == 0
    assert json.loads(out)["is_kan"] is False


def test_twisted_arrows_dot(capsys):
    """Test the DOT rendering of Tw([1])."""
    code, out = run(capsys, "cat", "tw", "[1]", "--format", "dot")
    assert code == 0
    assert out.count("->") == 2


def test_category_check(capsys):
    """Test the axiom check of a corpus category."""
    code, out = run(capsys, "cat", "check", "square")
    assert code == 0
    assert json.loads(out)["problems"] == []


def test_shape_counts(capsys):
    """Test the shape command over a point."""
    code, out = run(capsys, "cat", "shape", "F2")
    assert code == 0
    assert json.loads(out)["counts"] == [3, 3, 0]


def test_operad_orbits(capsys):
    """Test the orbit count of AssInv at the identity."""
    code, out = run(capsys, "operad", "orbits")
    payload = json.loads(out)
    assert code == 0
    assert payload["fiber"] == 4
    assert payload["orbits"] == 2
    assert payload["free"] is True


def test_operad_normalized_ext(capsys):
    """Test pi0 of the normalized extension category of AssInv."""
    code, out = run(capsys, "operad", "ext", "--normalized")
    assert code == 0
    assert json.loads(out)["pi0"] == 2


def test_operad_coherence(capsys):
    """Test the default coherence square of Ass."""
    code, out = run(capsys, "operad", "coherence", "--operad", "Ass")
    payload = json.loads(out)
    assert code == 0
    assert payload["pushout"] is True
    assert payload["pi0"]["Ext(gf)"] == 5


def test_unknown_operad(capsys):
    """Test the error document for an unknown operad."""
    code, out = run(capsys, "operad", "fiber", "--operad", "Lie")
    assert code == 1
    assert json.loads(out)["error"]["code"] == "OPERAD_AXIOM"


def test_export_round_trip(capsys, tmp_path):
    """Test re-exporting a written certificate as JSON."""
    path = tmp_path / "horn.json"
    run(capsys, "anodyne", "search", "horn:3:1", "--out", str(path))
    code, out = run(capsys, "export", str(path))
    assert code == 0
    assert json.loads(out)["class"] == "inner_anodyne"


def test_unknown_selector_is_a_usage_error():
    """Test that argparse refuses unknown suite selectors."""
    with pytest.raises(SystemExit) as info:
        main(["suite", "everything"])
    assert info.value.code == 2


@pytest.mark.slow
def test_suite_comm(capsys, tmp_path):
    """Test the comm selector end to end with a report file."""
    report = tmp_path / "report.jsonl"
    code, out = run(capsys, "suite", "comm", "--report", str(report))
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines() if line]
    assert all(line["verdict"] == "pass" for line in lines)
    assert len(report.read_text().splitlines()) == len(lines)
