import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from sgt.cli import main, run

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "report.schema.json").read_text())


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def files(tmp_path):
    return {
        "rz2": write(tmp_path, "rz2.json", {"n": 2, "table": [[0, 1], [0, 1]]}),
        "bad": write(tmp_path, "bad.json", {"n": 2, "table": [[1, 0], [0, 0]]}),
        "range": write(tmp_path, "range.json", {"n": 2, "table": [[0, 1], [2, 1]]}),
        "z2": write(tmp_path, "z2.json", {"n": 2, "table": [[0, 1], [1, 0]]}),
        "rgroup": write(tmp_path, "rgroup.json", {"n": 4, "table": [[0, 1, 2, 3], [0, 1, 2, 3],
                                                                    [2, 3, 0, 1], [2, 3, 0, 1]],
                                                  "star": [0, 1, 3, 2]}),
        "swap": write(tmp_path, "swap.json", {"semigroup": "@z2.json", "x_size": 2,
                                              "p": [0, 0], "act": [[0, 1], [1, 0]]}),
        "chain": write(tmp_path, "chain.json", {"n": 2, "table": [[0, 0], [0, 1]]}),
        "collapse": write(tmp_path, "collapse.json", {"source": "@chain.json",
                                                      "target": "@chain.json", "map": [0, 0]}),
        "nostar": write(tmp_path, "nostar.json", {"n": 4, "table": [[0, 1, 2, 3], [0, 1, 2, 3],
                                                                    [2, 3, 0, 1], [2, 3, 0, 1]]}),
        "flip": write(tmp_path, "flip.json", {"beta": [1, 0]}),
        "broken": write(tmp_path, "broken.json", {"beta": [0, 0]}),
        "notjson": write(tmp_path, "notjson.json", {"hello": 1}),
    }


def check(argv, code):
    got, rep = run(argv)
    jsonschema.validate(rep, SCHEMA)
    assert got == code == rep["exit_code"], rep
    return rep


def test_classify(files):
    rep = check(["classify", files["rz2"]], 0)
    c = rep["result"]["classification"]
    assert c["is_band"] and not c["is_inverse"]


def test_validate(files):
    check(["validate", files["rz2"]], 0)
    rep = check(["validate", files["bad"]], 2)
    assert rep["error"]["type"] == "NotAssociative"
    assert rep["error"]["witness"]["elements"] == [0, 0, 1]
    assert check(["validate", files["range"]], 2)["error"]["type"] == "OutOfRangeEntry"
    check(["validate", files["swap"]], 0)
    check(["validate", files["collapse"]], 0)
    check(["validate", files["notjson"]], 2)
    check(["validate", "/nonexistent.json"], 2)
    check(["validate", files["rz2"], "--max-n", "1"], 2)


def test_green_order_star(files):
    rep = check(["green", files["z2"]], 0)
    assert rep["result"]["green"]["L"] == [[0, 1]]
    rep = check(["order", files["chain"]], 0)
    assert rep["result"]["order"] == [[0, 0], [0, 1], [1, 1]]
    check(["star-check", files["rgroup"]], 0)
    check(["star-check", files["chain"]], 0)
    check(["star-check", files["nostar"]], 2)
    bad = write(Path(files["rz2"]).parent, "badstar.json", {"n": 2, "table": [[0, 1], [0, 1]], "star": [1, 0]})
    rep = check(["star-check", bad], 1)
    assert rep["witnesses"]["S4"]["elements"] == [0]


def test_gamma_and_friends(files, tmp_path):
    out = tmp_path / "q.json"
    rep = check(["gamma", files["rgroup"], "--quotient", str(out)], 0)
    assert rep["result"]["classes"] == [[0, 1], [2, 3]]
    q = json.loads(out.read_text())
    assert q["projection"] == [0, 0, 1, 1] and q["n"] == 2
    check(["coordinatize", files["rgroup"]], 0)
    check(["lcover", files["rgroup"]], 0)
    check(["coordinatize", files["z2"]], 0)


def test_actions(files):
    rep = check(["action-check", files["swap"]], 0)
    assert rep["result"]["global_support"] is True
    check(["action-check", files["swap"], "--morphism", files["flip"], "--target", files["swap"]], 0)
    rep = check(["action-check", files["swap"], "--morphism", files["broken"],
                 "--target", files["swap"]], 1)
    assert "morphism" in rep["witnesses"]


def test_etale(files):
    rep = check(["etale-check", files["rgroup"]], 0)
    assert rep["result"]["characterization"]["kernel_is_gamma"]
    rep = check(["etale-check", files["collapse"]], 1)
    assert rep["result"]["characterization"]["image_is_left_ideal"]
    check(["build-action", files["collapse"]], 2)


def test_builds_and_roundtrips(files, tmp_path):
    rep = check(["build-sx", files["swap"]], 0)
    assert rep["result"]["semidirect"]["star"] == [0, 1, 3, 2]
    rep = check(["build-action", files["rgroup"]], 0)
    assert rep["result"]["action"]["act"] == [[0, 1], [1, 0]]
    rep = check(["roundtrip", "action", files["swap"]], 0)
    assert rep["result"]["roundtrip"]["maps"]["idempotent_to_x"] == [0, 1]
    check(["roundtrip", "etale", files["rgroup"]], 0)
    out = tmp_path / "sx.json"
    check(["build-sx", files["swap"], "-o", str(out)], 0)
    assert json.loads(out.read_text())["pairs"] == [[0, 0], [0, 1], [1, 0], [1, 1]]


def test_gen(files, tmp_path):
    rep = check(["gen", "right_group", "--params", "n=2", "m=2", "action=swap"], 0)
    assert rep["result"]["artifact"]["star"] == [0, 1, 3, 2]
    rep = check(["gen", "random_action", "--params", "base=symmetric_inverse_monoid:n=2",
                 "x_size=3", "--seed", "4"], 0)
    assert rep["result"]["artifact"]["x_size"] == 3
    rep = check(["gen", "--find-stars", files["nostar"]], 0)
    assert [0, 1, 3, 2] in rep["result"]["stars"]
    check(["gen", "right_group", "--params", "n=3", "m=2", "action=swap"], 2)
    out = tmp_path / "g.json"
    check(["gen", "symmetric_inverse_monoid", "--params", "n=2", "-o", str(out)], 0)
    assert json.loads(out.read_text())["n"] == 7


def test_deterministic_reports(files):
    def strip(r):
        r = dict(r)
        r.pop("timing")
        return json.dumps(r, sort_keys=True)

    for argv in (["roundtrip", "etale", files["rgroup"]], ["suite", "--max-n", "2"],
                 ["gen", "random_action", "--params", "base=semilattice_chain:n=3", "x_size=4"]):
        assert strip(run(argv)[1]) == strip(run(argv)[1])


def test_suite_codes():
    rep = check(["suite", "--max-n", "1"], 0)
    assert all(rep["verdicts"].values())
    check(["suite", "--max-n", "2", "--inject", "semidirect-star"], 3)


def test_main_prints_json(files, capsys):
    assert main(["classify", files["rz2"]]) == 0
    rep = json.loads(capsys.readouterr().out)
    jsonschema.validate(rep, SCHEMA)


def test_console_script_usage_error():
    proc = subprocess.run([sys.executable, "-m", "sgt.cli", "nonsense"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == "" and "usage" in proc.stderr
