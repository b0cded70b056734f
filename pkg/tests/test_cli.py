import itertools
import json

import pytest

from tropehrhart.cli import main

from conftest import FANO_DIAGRAM, FANO_LINES


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    bases = [
        sorted(b)
        for b in itertools.combinations(range(1, 8), 3)
        if set(b) not in FANO_LINES
    ]
    fano = {
        "fan": {"rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[1, 2], [2, 3], [1, 3]]},
        "matroid": {"m": 7, "bases": bases},
        "diagram": [list(row) for row in FANO_DIAGRAM],
    }
    u23_bundle = {
        "fan": {"rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[1, 2], [2, 3], [1, 3]]},
        "matroid": {"m": 3, "bases": [[1, 2], [1, 3], [2, 3]]},
        "diagram": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    }
    bad = dict(u23_bundle, diagram=[[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    paths = {}
    for name, data in [
        ("fano", fano),
        ("u23_bundle", u23_bundle),
        ("bad", bad),
        ("u23_matroid", {"m": 3, "bases": [[1, 2], [1, 3], [2, 3]]}),
        ("chain", {"terms": [{"coeff": 2, "vertices": [[0, 0], [1, 0], ["1/1", "2/2"]]}]}),
    ]:
        path = root / f"{name}.json"
        path.write_text(json.dumps(data))
        paths[name] = str(path)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_chi_total(files, capsys):
    code, out = run(capsys, "chi", "--bundle", files["fano"])
    assert code == 0
    assert json.loads(out)["chi_total"] == 27


def test_chi_table(files, capsys):
    code, out = run(capsys, "chi", "--bundle", files["fano"], "--u", "0,0", "--table")
    assert code == 0
    assert "chi = 9 - 9 + 3 = 3" in out


def test_h0(files, capsys):
    code, out = run(capsys, "h0", "--bundle", files["fano"])
    assert code == 0
    assert json.loads(out)["h0_total"] == 27
    code, out = run(capsys, "h0", "--bundle", files["fano"], "--u", "1,1")
    assert json.loads(out)["h0_u"] == 1


def test_validate_good(files, capsys):
    code, out = run(capsys, "validate", "--bundle", files["u23_bundle"])
    assert code == 0
    report = json.loads(out)
    assert report["valid"] and report["rank"] == 2
    assert report["adapted_bases"]["1,2"] == [1, 2]


def test_validate_bad_row(files, capsys):
    code, out = run(capsys, "validate", "--bundle", files["bad"])
    assert code == 2
    err = json.loads(out)["error"]
    assert err["type"] == "RowNotInBergmanError"
    assert err["row"] == 1
    assert err["level_set"] == [1, 2]


def test_missing_file(capsys):
    code, out = run(capsys, "validate", "--bundle", "/nonexistent.json")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "ValidationError"


def test_malformed_inputs_exit_2(tmp_path, capsys):
    bad_json = tmp_path / "broken.json"
    bad_json.write_text("{not json")
    code, out = run(capsys, "validate", "--bundle", str(bad_json))
    assert code == 2 and "malformed JSON" in json.loads(out)["error"]["message"]

    bad_number = tmp_path / "badnum.json"
    bad_number.write_text(json.dumps({
        "fan": {"rays": [[1, 0], ["x", 1], [-1, -1]],
                "cones": [[1, 2], [2, 3], [1, 3]]},
        "matroid": {"m": 3, "bases": [[1, 2], [1, 3], [2, 3]]},
        "diagram": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    }))
    code, out = run(capsys, "validate", "--bundle", str(bad_number))
    assert code == 2

    code, out = run(capsys, "alpha-eval", "--chain", str(bad_json))
    assert code == 2


def test_alpha_eval_bundle(files, capsys):
    code, out = run(capsys, "alpha-eval", "--bundle", files["fano"], "--u", "0,0")
    report = json.loads(out)
    assert report == {"alpha_u": 3, "chi_u": 3, "equal": True, "u": [0, 0]}
    code, out = run(capsys, "alpha-eval", "--bundle", files["fano"])
    assert json.loads(out)["alpha_total"] == 27


def test_alpha_eval_chain_file(files, capsys):
    code, out = run(capsys, "alpha-eval", "--chain", files["chain"], "--u", "0,0")
    assert json.loads(out)["value"] == 2
    code, out = run(capsys, "alpha-eval", "--chain", files["chain"], "--u", "5,5")
    assert json.loads(out)["value"] == 0


def test_hrr(files, capsys):
    code, out = run(capsys, "hrr", "--bundle", files["u23_bundle"])
    assert code == 0
    assert json.loads(out) == {"equal": True, "lhs": "8/1", "rhs": 8}


def test_resolve(files, capsys):
    code, out = run(
        capsys, "resolve", "--bundle", files["u23_bundle"], "--f", "0,0,0"
    )
    report = json.loads(out)
    assert report["k_class_identity"] is True
    f0 = report["bundles"][0]
    assert f0["codim"] == 0 and f0["rank"] == 6
    assert f0["characters"]["1,2"] == [
        [0, 0], [0, 0], [0, 1], [0, 1], [1, 0], [1, 0]
    ]


def test_taut_check(files, capsys):
    code, out = run(capsys, "taut-check", "--matroid", files["u23_matroid"])
    report = json.loads(out)
    assert code == 0
    assert report["all_equal"] is True
    assert report["failures"] == []
    assert report["verified_box"]["max_coord"] == 3


def test_flag_sum(capsys):
    code, out = run(capsys, "flag-sum", "--m", "5")
    assert json.loads(out) == {"m": 5, "sum": -1}


def test_reports_are_deterministic(files, capsys):
    _, first = run(capsys, "chi", "--bundle", files["fano"])
    _, second = run(capsys, "chi", "--bundle", files["fano"])
    assert first == second
    _, third = run(capsys, "resolve", "--bundle", files["u23_bundle"])
    _, fourth = run(capsys, "resolve", "--bundle", files["u23_bundle"])
    assert third == fourth
