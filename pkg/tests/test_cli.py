import csv
import io
import json

import pytest

from quadlat.cli import main
from quadlat.constructions import verify
from quadlat.report import ReportDocument, report_from_json, report_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_family_json(capsys):
    code, out, _ = run(capsys, "family", "--max", "60", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "family"
    assert [(r["q"], r["j"]) for r in doc["results"]] == [
        (3, 1), (11, 3), (19, 6), (43, 16), (51, 7), (59, 23)]
    assert "error" not in doc


def test_family_empty_and_usage(capsys):
    code, out, _ = run(capsys, "family", "--max", "2")
    assert code == 0 and "no admissible" in out
    with pytest.raises(SystemExit) as e:
        main(["family", "--max", "-1"])
    assert e.value.code == 2


def test_usage_errors():
    for argv in (["construct", "--target", "d4"],
                 ["construct", "--target", "d4", "--q", "3", "--k", "0"],
                 ["verify", "--target", "a8", "--q", "3"],
                 ["verify", "--target", "d8", "--q", "19"]):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == 2


def test_domain_errors(capsys):
    code, out, _ = run(capsys, "construct", "--target", "d8", "--q", "27", "--format", "json")
    assert code == 1
    err = json.loads(out)["error"]
    assert (err["type"], err["reason"], err["q"]) == ("NotSquarefree", "squarefree", 27)

    code, _, err = run(capsys, "verify", "--target", "d4", "--q", "35")
    assert code == 1
    assert json.loads(err.removeprefix("error: "))["reason"] == "factor-residue"

    code, _, _ = run(capsys, "verify", "--target", "e8", "--k", "2")
    assert code == 1


def test_verify_plain(capsys):
    code, out, _ = run(capsys, "verify", "--target", "d4", "--q-max", "100")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 8
    assert all("verdict=D4" in l and "density=1/8" in l for l in lines)


def test_verify_json_fields(capsys):
    code, out, _ = run(capsys, "verify", "--target", "e8", "--k", "0", "--format", "json")
    assert code == 0
    r = json.loads(out)["results"][0]
    assert r["verdict"] == "E8"
    assert r["kissing"] == 240
    assert r["center_density"]["value"] == "1/16"


def test_json_is_deterministic(capsys):
    argv = ["verify", "--target", "d4d4", "--q", "19", "--format", "json"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    doc = ReportDocument.from_json(a)
    assert doc.to_json() == a


def test_report_round_trip():
    for r in (verify("D4", q=11), verify("D4+D4", q=3), verify("D8", k=1)):
        assert report_from_json(report_to_json(r)) == r


def test_csv(capsys):
    code, out, _ = run(capsys, "verify", "--target", "d4", "--q-max", "20", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["q"] for r in rows] == ["3", "11", "19"]
    assert all(r["center_density"] for r in rows)


def test_construct_plain_and_approx(capsys):
    code, out, _ = run(capsys, "construct", "--target", "e8", "--k", "0")
    assert code == 0
    assert "Gram matrix / 2q:" in out
    code, out, _ = run(capsys, "verify", "--target", "d4", "--q", "3", "--approx",
                       "--format", "json")
    r = json.loads(out)["results"][0]
    assert abs(r["approx_center_density"] - 0.125) < 1e-12
    code, out, _ = run(capsys, "verify", "--target", "d4", "--q", "3", "--approx",
                       "--format", "csv")
    assert "approx_center_density" in out.splitlines()[0]


def test_inputs_keep_zero(capsys):
    _, out, _ = run(capsys, "verify", "--target", "d4", "--k", "0", "--format", "json")
    assert json.loads(out)["inputs"] == {"target": "d4", "k": 0}
