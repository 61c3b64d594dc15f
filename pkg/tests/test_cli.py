import json
import subprocess
import sys

import pytest

from pentatile.catalog import sample
from pentatile.cli import EXIT_NO_RECIPE, EXIT_OK, EXIT_USAGE, main
from pentatile.pentagon import regular_pentagon


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def shape_file(tmp_path, p, name="shape.json"):
    path = tmp_path / name
    path.write_text(json.dumps(p.to_json()))
    return str(path)


def test_classify(tmp_path, capsys):
    code, out, _ = run(["classify", shape_file(tmp_path, sample(7))], capsys)
    assert code == EXIT_OK
    obj = json.loads(out)
    assert 7 in obj["membership"]
    assert set(obj["residuals"]) == {str(t) for t in range(1, 16)}


def test_classify_is_byte_identical(tmp_path, capsys):
    path = shape_file(tmp_path, sample(12))
    a = run(["classify", path, "--seed", "4"], capsys)[1]
    b = run(["classify", path, "--seed", "4"], capsys)[1]
    assert a == b


def test_tile_type(tmp_path, capsys):
    svg = tmp_path / "p.svg"
    code, out, _ = run(["tile", "--type", "1", "--patch", "2", "2", "--svg", str(svg)], capsys)
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["valid"] and obj["analysis"]["corona_classes"] == 1
    assert obj["patch"]["tiles"] == 25 * len(obj["recipe"]["unit"])
    assert svg.read_text().startswith("<svg")


def test_tile_json_file_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["tile", "--type", "4", "--patch", "1", "1", "--json", str(a)]) == EXIT_OK
    assert main(["tile", "--type", "4", "--patch", "1", "1", "--json", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_no_recipe_exit_code(tmp_path, capsys):
    code, out, err = run(["tile", "--type", "7", "--param", "A=86", "--no-reflections"], capsys)
    assert code == EXIT_NO_RECIPE
    assert json.loads(out)["recipe"] is None and "no recipe" in err
    code, out, _ = run(["tile", "--input", shape_file(tmp_path, regular_pentagon())], capsys)
    assert code == EXIT_NO_RECIPE
    assert json.loads(out)["exhaustive"] is True


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["classify", str(bad)], capsys)[0] == EXIT_USAGE
    assert run(["classify", str(tmp_path / "missing.json")], capsys)[0] == EXIT_USAGE
    assert run(["audit", "theorem1", "--samples", "0"], capsys)[0] == EXIT_USAGE
    assert run(["frobnicate"], capsys)[0] == EXIT_USAGE
    assert run(["tile"], capsys)[0] == EXIT_USAGE
    assert run(["tile", "--type", "20"], capsys)[0] == EXIT_USAGE
    assert run(["tile", "--type", "1", "--param", "A"], capsys)[0] == EXIT_USAGE
    assert run(["venn"], capsys)[0] == EXIT_USAGE
    assert run(["venn", "--pair", "1", "1"], capsys)[0] == EXIT_USAGE
    assert run(["catalog", "--tol", "0"], capsys)[0] == EXIT_USAGE
    assert run(["catalog", "--unit-cap", "17"], capsys)[0] == EXIT_USAGE


def test_venn(capsys):
    code, out, _ = run(["venn", "--pair", "2", "8", "--pair", "3", "7", "--triple", "1", "2", "12"], capsys)
    assert code == EXIT_OK
    cells = json.loads(out)["cells"]
    assert cells["2,8"]["verdict"] == "FixedShapes" and len(cells["2,8"]["shapes"]) == 3
    assert cells["3,7"]["verdict"] == "Empty"
    assert len(cells["1,2,12"]["shapes"]) == 1


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("PENTA_SEED", "17")
    assert json.loads(run(["catalog"], capsys)[1])["seed"] == 17
    monkeypatch.setenv("PENTA_SEED", "x")
    assert run(["catalog"], capsys)[0] == EXIT_USAGE


def test_audit_reflections(capsys):
    code, out, _ = run(["audit", "reflections", "--samples", "2"], capsys)
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["kind"] == "reflections" and obj["shapes"] == 2 and obj["recipes_found"] == 0


@pytest.mark.parametrize("argv", [["catalog"], ["classify", "-"]])
def test_module_entry_point(argv):
    stdin = json.dumps(sample(3).to_json())
    res = subprocess.run([sys.executable, "-m", "pentatile.cli", *argv], input=stdin,
                         capture_output=True, text=True)
    assert res.returncode == 0
    json.loads(res.stdout)
