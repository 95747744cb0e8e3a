import json
import subprocess
import sys
from pathlib import Path

import pytest

from coulomb_weyl import cli, golden
from coulomb_weyl.request import RequestError, parse_request, serialize_request

REQUESTS = Path(__file__).resolve().parent.parent / "requests"


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="req.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


SU2_H = golden._doc([("SU", 2)], golden.std(0))


# ---------------------------------------------------------------- parsing

def test_b1_document_is_valid():
    req = parse_request(golden.b1_documents()["main"])
    assert len(req.group["factors"]) == 3


def test_json_syntax_error_has_position():
    with pytest.raises(RequestError, match=r"line 2, column"):
        parse_request('{"schema_version": 1,\n  "group": }')


def test_schema_error_has_path():
    doc = json.loads(json.dumps(SU2_H))
    doc["group"]["factors"][0]["family"] = "G"
    with pytest.raises(RequestError, match=r"\$\.group\.factors\[0\]\.family"):
        parse_request(doc)
    doc = json.loads(json.dumps(SU2_H))
    doc["schema_version"] = 2
    with pytest.raises(RequestError, match=r"schema_version"):
        parse_request(doc)


def test_non_central_kernel_is_rejected():
    doc = golden._doc([("SU", 2)], {"op": "quaternionify", "arg": golden.std(0)}, [["1/3"]])
    with pytest.raises(RequestError, match="not central"):
        parse_request(doc)


def test_odd_dimension_is_rejected():
    doc = golden._doc([("SU", 2)], {"op": "su2_irrep", "factor": 0, "twice_spin": 2})
    with pytest.raises(RequestError, match="odd"):
        parse_request(doc)


def test_non_self_dual_is_rejected():
    doc = golden._doc([("T", 1)], golden._w([((1,), 2)]))
    with pytest.raises(RequestError, match="negation"):
        parse_request(doc)


@pytest.mark.parametrize("path", sorted(REQUESTS.glob("*.json")), ids=lambda p: p.stem)
def test_round_trip(path):
    req = parse_request(path.read_text())
    again = parse_request(serialize_request(req))
    assert again == req
    assert serialize_request(again) == serialize_request(req)


# ---------------------------------------------------------------- commands

def test_analyze_is_deterministic(tmp_path, capsys):
    f = str(REQUESTS / "b4.json")
    code, out1, _ = run(["analyze", f], capsys)
    assert code == cli.EXIT_OK
    _, out2, _ = run(["analyze", f], capsys)
    assert out1 == out2
    rep = json.loads(out1)
    for section in ("obstruction", "cocycles", "identities", "torsor", "abelianization", "conditions"):
        assert section in rep
    assert rep["torsor"]["verdict"] == "trivial torsor"


def test_obstructed_input_skips_conditions(tmp_path, capsys):
    code, out, _ = run(["analyze", write(tmp_path, SU2_H)], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["conditions"] == {"skipped": "obstructed: Weyl cocycle c is not exact"}
    assert rep["torsor"]["verdict"] == "obstructed"


def test_subcommands_emit_one_section(capsys):
    f = str(REQUESTS / "b3.json")
    code, out, _ = run(["cocycles", f], capsys)
    assert code == 0 and set(json.loads(out)) == {"group", "representation", "xi0", "cocycles"}
    code, out, _ = run(["identities", f], capsys)
    rep = json.loads(out)["identities"]
    assert rep["pairs_checked"] == 64 and rep["delta_chi_mismatches"] == []


def test_xi0_flag(capsys):
    f = str(REQUESTS / "b4.json")
    code, out, _ = run(["cocycles", f, "--xi0", "5,1"], capsys)
    assert code == 0 and json.loads(out)["xi0"] == [5, 1]
    # pairs to zero with the weight (1, 1)
    code, _, err = run(["cocycles", f, "--xi0", "1,-1"], capsys)
    assert code == cli.EXIT_PARSE and "not regular" in err
    code, _, err = run(["cocycles", f, "--xi0", "1,2,3"], capsys)
    assert code == cli.EXIT_PARSE and "xi0" in err


def test_parse_error_exit_code(tmp_path, capsys):
    code, _, err = run(["analyze", write(tmp_path, "{not json")], capsys)
    assert code == cli.EXIT_PARSE and "line 1" in err
    code, _, err = run(["analyze", str(tmp_path / "missing.json")], capsys)
    assert code == cli.EXIT_PARSE and "cannot read" in err


def test_weyl_cap_exit_code(tmp_path, capsys):
    doc = golden._doc([("Sp", 2)], {"op": "quaternionify", "arg": golden.std(0)}, weyl_cap=4)
    code, _, err = run(["analyze", write(tmp_path, doc)], capsys)
    assert code == cli.EXIT_CAP and "cap" in err


def test_list_examples(capsys):
    code, out, _ = run(["list-examples"], capsys)
    assert code == 0
    assert set(json.loads(out)) == {"b1", "b2", "b3", "b4", "su2_family", "whenodd_ii", "kobst_witness"}


@pytest.mark.parametrize("name", sorted(golden.EXAMPLES))
def test_examples_match(name, capsys):
    code, out, err = run(["example", name], capsys)
    assert code == cli.EXIT_OK, err
    assert all(c["ok"] for c in json.loads(out)["checks"])


def test_example_mismatch_exit_code(monkeypatch, capsys):
    ex = golden.EXAMPLES["b4"]
    bad = golden.Example(ex.name, ex.title, ex.cases,
                         [golden.Check("wrong verdict", "nontrivial", golden._get("cases", "main", "torsor", "verdict"))],
                         ex.extras)
    monkeypatch.setitem(golden.EXAMPLES, "b4", bad)
    code, _, err = run(["example", "b4"], capsys)
    assert code == cli.EXIT_MISMATCH and "wrong verdict" in err


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "coulomb_weyl", "list-examples"], capture_output=True, text=True)
    assert res.returncode == 0 and "b3" in res.stdout
