import json
import logging

import pytest

from check_flags import CERTIFICATES, CheckFlags
from cli import build_parser, config_from_args, main
from tabulated import load_tabulated


def test_validate_tabulated(tabulated_file, capsys):
    """Test validating a tabulated file prints a PASS line per axiom."""
    assert main(["validate", str(tabulated_file), "--backend", "tabulated"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("tabulated: 3 objects, reduced=false")
    assert "PASS enough_projectives" in out


def test_validate_reports_failures(tmp_path, lambda2_text, capsys):
    """Test a failing axiom exits with one."""
    path = tmp_path / "broken.tab"
    path.write_text(lambda2_text.replace("object p proj\n", "object p proj inj\n"))
    assert main(["validate", str(path), "--backend", "tabulated"]) == 1
    assert "FAIL flag_consistency" in capsys.readouterr().out


def test_validate_algebra_as_json(algebra_file, capsys):
    """Test the JSON document of a two-term validation."""
    assert main(["validate", str(algebra_file), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == 1
    assert doc["command"] == "validate"
    assert doc["result"]["objects"] == ["P1", "P2", "P2>P1", "P1[1]", "P2[1]"]


@pytest.mark.parametrize("argv", [
    ["validate", "--backend", "bogus"],
    ["validate", "--backend", "interval:0"],
    ["validate", "--backend", "tabulated"],
    ["validate", "/nonexistent/lambda.tab", "--backend", "tabulated"],
    ["reduce", "--backend", "interval:2", "--rigid", "[2,2]", "--rigid", "[1,1]"],
    ["reduce", "--backend", "interval:2", "--rigid", "[3,3]"],
    ["picgroup", "--backend", "interval:2", "--targets", "A5"],
    ["export-tabulated", "--backend", "interval:2"],
])
def test_input_errors_exit_with_two(argv):
    """Test malformed input and arguments exit with two."""
    assert main(argv) == 2


def test_errors_are_logged(caplog):
    """Test a failing command logs its error with the command name."""
    assert main(["reduce", "--backend", "interval:2", "--rigid", "[3,3]"]) == 2
    assert "❌ Error running reduce: unknown objects in --rigid: [3,3]" in caplog.text


def test_written_files_are_logged(tmp_path, caplog):
    """Test writing to --output is logged at INFO."""
    caplog.set_level(logging.INFO)
    target = tmp_path / "poset.txt"
    assert main(["silt-poset", "--backend", "interval:2", "--output", str(target)]) == 0
    assert f"✅ Wrote {target}" in caplog.text


def test_reduce_command(capsys):
    """Test the text report of a reduction."""
    assert main(["reduce", "--backend", "interval:2", "--rigid", "[2,2]"]) == 0
    out = capsys.readouterr().out
    assert "reduced along [2,2]: [1,2]" in out
    assert "hom: [1,2]\n  [1,2]: 1\n" in out
    assert "ext: [1,2]\n  [1,2]: 0\n" in out
    assert "silting: 1" in out
    assert "bongartz max: [1,2]+[2,2]" in out
    assert "bijection roundtrip: true" in out


def test_reduce_exports_the_reduced_model(tmp_path, capsys):
    """Test --export writes a tabulated file of the reduction."""
    target = tmp_path / "reduced.tab"
    assert main(["reduce", "--backend", "interval:2", "--rigid", "[2,2]", "--export", str(target),
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"]["tables"] == {"hom": [[1]], "ext": [[0]]}
    assert load_tabulated(target).objects() == ("[1,2]",)


def test_silt_poset_dot(tmp_path):
    """Test DOT output, and that the interval backend rejects an input file."""
    target = tmp_path / "poset.dot"
    assert main(["silt-poset", str(tmp_path / "unused"), "--backend", "interval:2"]) == 2
    assert main(["silt-poset", "--backend", "interval:2", "--format", "dot", "--output", str(target)]) == 0
    assert target.read_text().startswith("digraph silt {")


def test_silt_poset_budget(capsys):
    """Partial output is written before the budget error surfaces."""
    assert main(["silt-poset", "--backend", "interval:3", "--poset-budget", "1", "--format", "json"]) == 3
    doc = json.loads(capsys.readouterr().out)
    assert doc["partial"] is True
    assert doc["result"]["complete"] is False


def test_picture_command(capsys):
    """Test the picture JSON carries both checks and the provenance."""
    assert main(["picture", "--backend", "interval:2", "--format", "json", "--certificates"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["objects"]) == 5
    assert doc["cubical"]["passed"]
    assert doc["interchange"]["passed"]
    assert "provenance" in doc


def test_picgroup_command(capsys):
    """Test the group report names the labelling of the poset route."""
    assert main(["picgroup", "--backend", "interval:2", "--targets", "Z2,S3"]) == 0
    out = capsys.readouterr().out
    assert "poset route (labelled by generating objects): gens: b0\n" in out
    assert "abelianization: Z" in out
    assert "homomorphisms: Z2=2 S3=6" in out
    assert "agree: true" in out


def test_export_tabulated(tmp_path):
    """Test an exported interval model validates as a tabulated file."""
    target = tmp_path / "lambda2.json"
    assert main(["export-tabulated", "--backend", "interval:2", "--output", str(target)]) == 0
    model = load_tabulated(target)
    assert model.objects() == ("[1,2]", "[2,2]", "[1,1]")
    assert main(["validate", str(target), "--backend", "tabulated"]) == 0


def test_flags_reach_the_config():
    """Test parsed flags land in RunConfig without touching CheckFlags."""
    args = build_parser().parse_args(["picture", "--backend", "interval:2", "--certificates", "--threads", "2"])
    config = config_from_args(args)
    assert config.certificates
    assert config.threads == 2
    assert config.interval_size == 2
    assert not CheckFlags.is_enabled(CERTIFICATES)
