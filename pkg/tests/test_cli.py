import io
import json

import pytest

from dblcat.cli import run_command


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    out = {}
    for line in text.splitlines():
        if line == "--- machine":
            break
        key, _, value = line.partition(": ")
        out.setdefault(key, value)
    return out


def make(tmp_path, name, *argv):
    path = tmp_path / name
    code, _, _ = run("instance", *argv, "-o", path)
    assert code == 0
    return path


def test_instance_then_validate(tmp_path):
    path = make(tmp_path, "z2.doc", "group_double_groupoid", "--n", 2, "--m", 2, "--materialize")
    code, out, _ = run("validate", path)
    assert code == 0
    assert fields(out)["validate.ok"] == "yes"


@pytest.mark.slow
def test_validate_rel2(tmp_path):
    path = make(tmp_path, "rel2.doc", "rel", "--n", 2)
    code, out, _ = run("validate", path)
    assert code == 0
    assert fields(out)["result"] == "pass"


def test_framed_classify_rel3(tmp_path):
    path = make(tmp_path, "rel3.doc", "rel", "--n", 3)
    code, out, _ = run("framed", path, "--classify")
    f = fields(out)
    assert code == 0
    assert f["fully_faithful_are_injections"] == "yes"
    assert f["absolutely_dense_are_surjections"] == "yes"
    assert len(json.loads(f["fully_faithful"])) == 20
    assert len(json.loads(f["absolutely_dense"])) == 17


def test_length_no_exits_one(tmp_path):
    path = make(tmp_path, "two.doc", "length_two_witness")
    code, out, _ = run("length", path)
    assert code == 1
    assert fields(out)["length_one"] == "no"


def test_evalcheck_small(tmp_path):
    path = make(tmp_path, "bundle.doc", "monoid_bundle", "--category", "cyclic", "--n", 2)
    code, out, _ = run("evalcheck", path)
    f = fields(out)
    assert code == 0
    assert (f["h_star_identity"], f["full_on_gamma"], f["injective"]) == ("yes", "yes", "yes")


@pytest.mark.slow
def test_evalcheck_relstar3(tmp_path):
    path = make(tmp_path, "relstar3.doc", "rel", "--n", 3, "--restriction", "star")
    code, out, _ = run("evalcheck", path)
    f = fields(out)
    assert code == 0
    assert (f["h_star_identity"], f["full_on_gamma"], f["injective"]) == ("yes", "yes", "yes")


def test_witness_on_span(tmp_path):
    path = make(tmp_path, "span.doc", "span", "--n", 2, "--apex", 3, "--restriction", "star")
    code, out, _ = run("witness", path)
    f = fields(out)
    assert code == 0
    assert f["found"] == "yes" and f["replayed"] == "yes"


def test_machine_block(tmp_path):
    path = make(tmp_path, "two.doc", "length_two_witness")
    code, out, _ = run("length", path, "--machine")
    text, _, block = out.partition("--- machine\n")
    data = json.loads(block)
    assert data["command"] == "length"
    assert data["length_one"] is False
    assert fields(text)["result"] == "fail"


def test_unreadable_input_exits_two(tmp_path):
    bad = tmp_path / "bad.doc"
    bad.write_text('{"format": 1,')
    code, out, err = run("validate", bad)
    assert code == 2 and out == ""
    assert err.startswith("error: (1, 14)")
    code, _, err = run("validate", tmp_path / "missing.doc")
    assert code == 2 and "cannot read" in err


def test_range_error_exits_two(tmp_path):
    bad = tmp_path / "bad.doc"
    bad.write_text(json.dumps({"format": 1, "kind": "category", "payload": {
        "objects": ["a"], "morphisms": [[0, 0, 0]], "identities": [0], "composition": [[0, 99, 0]]}}))
    code, _, err = run("validate", bad)
    assert code == 2
    assert "$.payload.composition[0][1]" in err


def test_budget_exhausted_exits_two(tmp_path):
    path = make(tmp_path, "rel2.doc", "rel", "--n", 2)
    code, out, _ = run("framed", path, "--budget", 10)
    assert code == 2
    assert fields(out)["result"] == "budget-exceeded"


def test_bad_usage_exits_two(capsys):
    assert run("frobnicate")[0] == 2
    assert run("instance", "rel", "--n", 0)[0] == 2


def test_missing_instance_parameter(tmp_path):
    code, _, err = run("instance", "span", "--n", 2)
    assert code == 2
    assert "span needs apex" in err
