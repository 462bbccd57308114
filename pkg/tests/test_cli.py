import json

import pytest

from nodalvb.cli import run
from nodalvb.curves import spec_to_dict


@pytest.fixture
def curve_file(tmp_path, golden_curve):
    path = tmp_path / "curve.json"
    path.write_text(json.dumps(spec_to_dict(golden_curve)))
    return str(path)


@pytest.fixture
def bad_curve_file(tmp_path, golden_curve):
    doc = spec_to_dict(golden_curve)
    # break N2: self-relate the last slot
    doc["relations"].append([["y3", 2], ["y3", 2]])
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_ok(curve_file, capsys):
    assert run(["validate", curve_file]) == 0
    out = capsys.readouterr().out
    assert "ok" in out and "True" in out


def test_validate_violations_exit_1(bad_curve_file, capsys):
    assert run(["validate", bad_curve_file]) == 1
    out = capsys.readouterr().out
    assert "N2" in out
    assert "y3" in out


def test_classify(curve_file, capsys):
    assert run(["classify", curve_file, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "Tame"
    assert doc["rule"] == "C36"
    assert doc["witness"]


def test_classify_rejects_invalid(bad_curve_file, capsys):
    assert run(["classify", bad_curve_file]) == 1
    err = capsys.readouterr().err
    assert "N2" in err


def test_unreadable_file(capsys):
    assert run(["classify", "/no/such/file.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_schema_violation(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{\"components\": [{}]}")
    assert run(["validate", str(path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_not_json(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("not json")
    assert run(["validate", str(path)]) == 2


def test_usage_error(curve_file):
    assert run(["enumerate", curve_file, "--max-word-len", "2"]) == 2
    assert run(["no-such-command", curve_file]) == 2
    assert run(["classify", curve_file, "--format", "dot"]) == 2


def test_bunch_dot(curve_file, capsys):
    assert run(["bunch", curve_file, "--window", "0:0", "--format", "dot"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("graph bunch")
    assert out.count("subgraph") == 4


def test_bunch_table(curve_file, capsys):
    assert run(["bunch", curve_file, "--window", "0:1"]) == 0
    out = capsys.readouterr().out
    assert "(y1,1)" in out and "(0,y1)" in out and "(1,y1)" in out


def test_bad_window(curve_file, capsys):
    assert run(["bunch", curve_file, "--window", "2:1"]) == 2
    assert run(["bunch", curve_file, "--window", "x"]) == 2


def test_enumerate_deterministic(curve_file, capsys):
    args = [
        "enumerate",
        curve_file,
        "--window",
        "0:0",
        "--max-word-len",
        "8",
        "--format",
        "json",
    ]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert all("usual[" in d["object"] or "special[" in d["object"] or
               "bispecial[" in d["object"] or "band[" in d["object"]
               for d in doc)
    assert all(d["rank"] >= 1 for d in doc)


def test_realize_verify_roundtrip(tmp_path, curve_file, capsys):
    band = (
        "band[cyc[(y2,2)~(y2,1)-(0,y2)~(0,y4)-(y4,1)~(y3,1)-(0,y3)~(0,y1)"
        "-(y1,1)~(y1,1)-(0,y1)~(0,y3)-(y3,1)~(y4,1)-(0,y4)~(0,y2)]; 1; generic]"
    )
    out2 = tmp_path / "b2.json"
    out3 = tmp_path / "b3.json"
    assert (
        run(
            [
                "realize",
                curve_file,
                "--object",
                band,
                "--lambda",
                "2",
                "--out",
                str(out2),
            ]
        )
        == 0
    )
    assert (
        run(
            [
                "realize",
                curve_file,
                "--object",
                band,
                "--lambda",
                "3/1",
                "--out",
                str(out3),
            ]
        )
        == 0
    )
    doc = json.loads(out2.read_text())
    assert doc["invertible"] is True
    assert doc["params"]["lambda"] == "2"

    assert run(["verify", curve_file, str(out2), "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["indecomposable"] is True

    assert (
        run(["verify", curve_file, str(out2), str(out3), "--format", "json"])
        == 0
    )
    rep = json.loads(capsys.readouterr().out)
    assert rep["isomorphic"] is False

    assert (
        run(["verify", curve_file, str(out2), str(out2), "--format", "json"])
        == 0
    )
    rep = json.loads(capsys.readouterr().out)
    assert rep["isomorphic"] is True
    assert "witness" in rep


def test_realize_rejects_float_lambda(curve_file, capsys):
    band = (
        "band[cyc[(y2,2)~(y2,1)-(0,y2)~(0,y4)-(y4,1)~(y3,1)-(0,y3)~(0,y1)"
        "-(y1,1)~(y1,1)-(0,y1)~(0,y3)-(y3,1)~(y4,1)-(0,y4)~(0,y2)]; 1; generic]"
    )
    assert (
        run(["realize", curve_file, "--object", band, "--lambda", "2.5"]) == 2
    )
    err = capsys.readouterr().err
    assert "floating" in err


def test_almost_string_pipeline(tmp_path, capsys):
    doc = {
        "components": [{"id": "C"}],
        "points": [
            {"id": "y0", "component": "C", "image": "x0", "n": 2},
            {"id": "e1", "component": "C", "image": "x1", "n": 2},
            {"id": "e2", "component": "C", "image": "x2", "n": 2},
        ],
        "relations": [[["y0", 1], ["y0", 2]]],
    }
    path = tmp_path / "almost.json"
    path.write_text(json.dumps(doc))
    assert run(["classify", str(path), "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] == "Tame" and rep["rule"] == "C42"
    assert (
        run(
            [
                "enumerate",
                str(path),
                "--window",
                "0:0",
                "--max-word-len",
                "4",
                "--format",
                "json",
            ]
        )
        == 0
    )
    objs = json.loads(capsys.readouterr().out)
    assert any("band[" in o["object"] for o in objs)
    assert any("(0,y0,0)" in o["object"] for o in objs)


def test_realize_string_object(curve_file, capsys):
    assert (
        run(
            [
                "realize",
                curve_file,
                "--object",
                "special[(y1,1)-(0,y1)~(0,y3)-(y3,2); 1]",
            ]
        )
        == 0
    )
    doc = json.loads(capsys.readouterr().out)
    assert doc["summands"] == [["T1", 0, 1]]
    assert doc["invertible"] is True
