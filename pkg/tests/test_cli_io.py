import json
import re

import pytest

from cli.app import run_command
from cli.meshfile import parse_mesh, parse_vectors, read_mesh, serialize_mesh, serialize_vectors
from cli.svg import render_svg
from tests.conftest import MESHES
from tmesh_spline.errors import MeshSemanticError, MeshSyntaxError
from tmesh_spline.mesh import HierSpec, extend, generate, tensor_mesh
from tmesh_spline.spline import w_nullspace

BICUBIC = str(MESHES / "bicubic_three_regions.json")
ISOLATED = str(MESHES / "biquadratic_isolated_cell.json")

BAD_RATIONAL = """{
  "format": "tmesh/1",
  "m": 1,
  "n": 1,
  "kind": "segments",
  "segments": [
    {"orientation": "vertical", "fixed": "3/0", "lo": 0, "hi": 1}
  ]
}
"""


def test_read_bicubic_document():
    loaded = read_mesh(BICUBIC)
    assert (loaded.m, loaded.n, loaded.pairing) == (3, 3, "algebraic")
    assert loaded.hierarchical is not None
    assert len(loaded.tmesh.cells) == 84


def test_hierarchical_document_round_trip(isolated_cell):
    text = serialize_mesh(isolated_cell)
    again = parse_mesh(text)
    assert again.hierarchical.spec == isolated_cell.spec
    assert serialize_mesh(again.hierarchical) == text


def test_segments_document_round_trip(isolated_cell):
    extended = extend(isolated_cell.mesh, 2, 2)
    loaded = parse_mesh(serialize_mesh(extended, 2, 2))
    assert loaded.hierarchical is None
    assert loaded.tmesh.point_index.keys() == extended.point_index.keys()
    assert loaded.tmesh.inner_domain == extended.inner_domain
    assert [e.provenance for e in loaded.tmesh.ledges] == [e.provenance for e in extended.ledges]
    assert [e.level for e in loaded.tmesh.ledges] == [e.level for e in extended.ledges]


def test_vectors_round_trip():
    mesh = tensor_mesh(range(4), range(4))
    basis = w_nullspace(mesh, 1, 1)
    text = serialize_vectors(mesh, 1, 1, basis, [f"W{i}" for i in range(len(basis))], [{} for _ in basis])
    loaded = parse_vectors(text)
    assert loaded.labels == ["W0", "W1", "W2", "W3"]
    assert [cv.by_point() for cv in loaded.vectors] == [cv.by_point() for cv in basis]


def test_zero_denominator_position():
    with pytest.raises(MeshSyntaxError) as info:
        parse_mesh(BAD_RATIONAL)
    assert info.value.line == 7
    assert info.value.column == BAD_RATIONAL.splitlines()[6].index('"3/0"') + 1


def test_malformed_json_position():
    with pytest.raises(MeshSyntaxError) as info:
        parse_mesh('{"m": 1,\n "n": }')
    assert info.value.line == 2


def test_document_must_be_object():
    with pytest.raises(MeshSyntaxError):
        parse_mesh("[1, 2]")


def test_stale_address_in_document():
    doc = {
        "m": 3,
        "n": 3,
        "kind": "hierarchical",
        "spec": {"m": 3, "n": 3, "p": 5, "q": 6, "script": [["1,1"], ["0,0/0,0"]]},
    }
    with pytest.raises(MeshSemanticError) as info:
        parse_mesh(json.dumps(doc))
    assert info.value.details["cause"] == "StaleAddressError"


def test_non_rectangular_segments():
    doc = {
        "m": 1,
        "n": 1,
        "kind": "segments",
        "segments": [
            {"orientation": "vertical", "fixed": 0, "lo": 0, "hi": 1},
            {"orientation": "vertical", "fixed": 1, "lo": 0, "hi": 2},
            {"orientation": "horizontal", "fixed": 0, "lo": 0, "hi": 1},
            {"orientation": "horizontal", "fixed": 1, "lo": 0, "hi": 1},
        ],
    }
    with pytest.raises(MeshSemanticError):
        parse_mesh(json.dumps(doc))


def test_header_degrees_must_match_script():
    doc = {"m": 2, "n": 2, "kind": "hierarchical", "spec": {"m": 3, "n": 3, "p": 2, "q": 2}}
    with pytest.raises(MeshSemanticError):
        parse_mesh(json.dumps(doc))


def line_strokes(svg):
    return [re.search(r'stroke="([^"]+)"', line).group(1) for line in svg.splitlines() if "<line " in line]


def test_svg_draws_each_ledge():
    mesh = generate(HierSpec(m=3, n=3, p=5, q=6)).mesh
    svg = render_svg(mesh)
    assert len(line_strokes(svg)) == 6 + 7
    assert svg.startswith('<?xml version="1.0"')
    assert "inner-domain" not in svg


def test_svg_colors_by_level(bicubic_mesh):
    svg = render_svg(bicubic_mesh.mesh)
    assert len(set(line_strokes(svg))) == 3
    assert len(set(line_strokes(render_svg(bicubic_mesh.mesh, by_level=False)))) == 1


def test_svg_is_deterministic_with_integer_view_box(isolated_cell):
    extended = extend(isolated_cell.mesh, 2, 2)
    first, second = render_svg(extended), render_svg(extended)
    assert first == second
    assert 'class="inner-domain"' in first
    view_box = re.search(r'viewBox="([^"]+)"', first).group(1)
    assert all(part.isdigit() for part in view_box.split())


def test_svg_labels(isolated_cell):
    mesh = isolated_cell.mesh
    labels = {mesh.ledges[0].key(): "first"}
    assert ">first</text>" in render_svg(mesh, labels=labels)


def run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_dim_formula_only(capsys):
    code, out = run(capsys, "dim", BICUBIC, "--formula-only")
    report = json.loads(out)
    assert code == 0
    assert report["formula"] == 93
    assert report["census"]["delta_per_level"] == [0, 1, 2]


def test_dim_all_paths_with_ledger(capsys):
    code, out = run(capsys, "dim", ISOLATED, "--ledger")
    report = json.loads(out)
    assert code == 0
    assert (report["formula"], report["conformality"], report["cellwise"]) == (25, 25, 25)
    assert report["agreement"] is True
    assert [row["level"] for row in report["ledger"]] == [1, 0]


def test_dim_formula_refused_for_segments(tmp_path, capsys):
    path = tmp_path / "grid.json"
    path.write_text(serialize_mesh(tensor_mesh([0, 1, 2], [0, 1, 2]), 2, 2))
    code, out = run(capsys, "dim", str(path), "--formula-only")
    assert code == 2
    assert json.loads(out)["error"] == "NotInClassError"


def test_basis_then_check_and_eval(tmp_path, capsys):
    vectors = tmp_path / "basis.json"
    code, out = run(capsys, "basis", ISOLATED, "-o", str(vectors))
    report = json.loads(out)
    assert code == 0
    assert report["count"] == report["expected"] == 25
    assert report["per_level"] == {"0": 25}

    code, out = run(capsys, "check", str(vectors))
    assert code == 0
    assert json.loads(out)["nonconformal"] == []

    code, out = run(capsys, "eval", str(vectors), "--point", "1,1", "--point", "3/2,1/2", "--index", "0")
    values = json.loads(out)["values"]
    assert code == 0
    assert list(values) == ["N1"]
    assert set(values["N1"]) == {"1,1", "3/2,1/2"}


def test_eval_index_out_of_range(tmp_path, capsys):
    vectors = tmp_path / "basis.json"
    run(capsys, "basis", ISOLATED, "-o", str(vectors))
    code, out = run(capsys, "eval", str(vectors), "--point", "0,0", "--index", "99")
    assert code == 2
    assert json.loads(out)["error"] == "MeshSemanticError"


def test_gen_from_levels(tmp_path, capsys):
    target = tmp_path / "gen.json"
    code, out = run(capsys, "gen", "--m", "2", "--n", "2", "--p", "3", "--q", "3", "--level", "1,1", "-o", str(target))
    report = json.loads(out)
    assert code == 0
    assert report["delta"] == 1
    assert report["regions"] == {"1,1": [2, 2]}
    assert read_mesh(target).hierarchical.spec.script == [["1,1"]]


def test_gen_document_on_stdout(capsys):
    code, out = run(capsys, "gen", "--p", "2", "--q", "2")
    assert code == 0
    assert json.loads(out)["kind"] == "hierarchical"


def test_check_and_render_mesh(tmp_path, capsys):
    code, out = run(capsys, "check", ISOLATED)
    assert code == 0
    assert json.loads(out)["hierarchical"] is True
    svg = tmp_path / "mesh.svg"
    code, _ = run(capsys, "render", ISOLATED, "--order-labels", "-o", str(svg))
    assert code == 0
    assert "</text>" in svg.read_text()


def test_input_errors_exit_two(tmp_path, capsys):
    assert run(capsys, "dim", str(tmp_path / "missing.json"))[0] == 2
    assert run_command(["dim"]) == 2
