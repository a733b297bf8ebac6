import copy
import json
from pathlib import Path

import pytest

from contactred.cli import main
from contactred.corpus import build_manifest, corpus_list, corpus_manifest, load_manifest, run
from contactred.errors import InputError

FIXTURE = Path(__file__).parent / "fixtures" / "r3_groupoid.json"


def raw_fixture():
    return json.loads(FIXTURE.read_text())


def write(tmp_path, doc, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc, indent=2))
    return p


def test_fixture_loads():
    m = load_manifest(FIXTURE)
    assert m.count("groupoids") == 1
    assert len(m.tasks) == 2


def test_dangling_reference_is_named_with_line(tmp_path):
    doc = raw_fixture()
    doc["maps"]["src"]["source"] = "Gamma"
    with pytest.raises(InputError, match="Gamma") as err:
        load_manifest(write(tmp_path, doc))
    assert "line" in str(err.value)


def test_unknown_version(tmp_path):
    doc = raw_fixture()
    doc["version"] = "contactred-manifest/99"
    with pytest.raises(InputError, match="version"):
        load_manifest(write(tmp_path, doc))


def test_json_syntax_error_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{\n  "version": "contactred-manifest/1",\n  "charts": {,}\n}')
    with pytest.raises(InputError, match="line 3"):
        load_manifest(p)


def test_reference_cycle(tmp_path):
    doc = raw_fixture()
    doc["forms"]["loop_a"] = {"d": "loop_b"}
    doc["forms"]["loop_b"] = {"d": "loop_a"}
    with pytest.raises(InputError, match="cycl"):
        load_manifest(write(tmp_path, doc))


def test_unknown_operation_and_duplicates():
    doc = raw_fixture()
    doc["tasks"].append({"name": "x", "op": "nope"})
    with pytest.raises(InputError, match="nope"):
        build_manifest(doc)
    doc = raw_fixture()
    doc["tasks"].append(dict(doc["tasks"][0]))
    with pytest.raises(InputError, match="duplicate"):
        build_manifest(doc)


def test_exit_codes():
    doc = raw_fixture()
    assert run(build_manifest(doc)).exit_code == 0
    empty = dict(doc, tasks=[])
    rep = run(build_manifest(empty))
    assert rep.exit_code == 0 and rep.tasks == []
    broken = copy.deepcopy(doc)
    broken["groupoids"]["R3"]["f"] = "1"
    rep = run(build_manifest(broken))
    assert rep.exit_code == 1
    assert rep.tasks[1]["verdict"]["witness"]


def test_inconclusive_exit_code():
    doc = corpus_manifest("sl2_casimir")
    doc["tasks"] = [{"name": "tiny", "op": "jacobi_bracket", "structure": "LP_sl2", "f": "mu1", "g": "mu2",
                     "expect": "-mu3 + 10^(-30)*sqrt(mu1^2+2)"}]
    rep = run(build_manifest(doc))
    assert rep.tasks[0]["status"] == "Inconclusive"
    assert rep.exit_code == 2
    doc["tasks"].append({"name": "wrong", "op": "jacobi_bracket", "structure": "LP_sl2",
                         "f": "mu1", "g": "mu2", "expect": "mu3"})
    assert run(build_manifest(doc)).exit_code == 1


def test_input_error_exit_code():
    doc = raw_fixture()
    doc["tasks"] = [{"name": "leaf", "op": "leaf_type", "structure": "nope", "point": [0]}]
    with pytest.raises(InputError):
        build_manifest(doc)
    doc = corpus_manifest("u2_orbits")
    doc["tasks"] = [{"name": "bad", "op": "orbit_t0", "xi": "(1,sqrt(2))"}]
    rep = run(build_manifest(doc))
    assert rep.tasks[0]["status"] == "InputError" and rep.exit_code == 3


def test_reports_are_byte_identical():
    m = build_manifest(corpus_manifest("example_6_1"))
    a = run(m, seed=11).dumps()
    b = run(build_manifest(corpus_manifest("example_6_1")), seed=11).dumps()
    assert a == b
    assert '"seed": 11' in a


def test_parallel_report_matches_serial():
    m = build_manifest(corpus_manifest("r3_groupoid"))
    serial = run(m, seed=3).to_json()
    parallel = run(m, seed=3, parallelism=3).to_json()
    serial.pop("parallel"), parallel.pop("parallel")
    assert serial == parallel


def test_timings_only_on_request():
    m = build_manifest(raw_fixture())
    assert "seconds" not in run(m).dumps()
    assert "seconds" in run(m, timings=True).dumps()


def test_corpus_listing():
    items = corpus_list()
    assert len(items) >= 8
    assert all(i["anchor"] for i in items)
    assert json.loads(json.dumps(items)) == items


def test_cli_verify_and_reduce(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CONTACTRED_SEED", "5")
    assert main(["verify", str(FIXTURE)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["seed"] == 5 and out["format"] == "json" and len(out["tasks"]) == 2
    p = tmp_path / "ex.json"
    assert main(["corpus", "export", "example_6_1"]) == 0
    p.write_text(capsys.readouterr().out)
    assert main(["reduce", str(p), "--task", "n1.reduce_circle", "--seed", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["task"] == "n1.reduce_circle" and out["seed"] == 2
    assert out["tasks"][0]["result"]["alpha"]["terms"] == [[["a"], "2/(a^2 + 1)"]]


def test_cli_errors(capsys):
    assert main(["reduce", str(FIXTURE), "--task", "missing"]) == 3
    assert "missing" in capsys.readouterr().err
    assert main(["verify", "/nonexistent.json"]) == 3


def test_cli_orbit(capsys):
    assert main(["orbit", "t0", "(2,1)/sqrt(5)"]) == 0
    assert json.loads(capsys.readouterr().out)["t0"] == "1/sqrt(5)"
    assert main(["orbit", "prequant", "2", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["F"] == "-1/sqrt(5)"
    assert main(["orbit", "u2lens", "3", "1", "--format", "text"]) == 0
    assert "lens: 2" in capsys.readouterr().out


def test_cli_corpus(capsys):
    assert main(["corpus", "list", "--format", "json"]) == 0
    assert len(json.loads(capsys.readouterr().out)) >= 8
    assert main(["corpus", "run", "u2_orbits", "--format", "text"]) == 0
    assert "exit 0" in capsys.readouterr().out
    assert main(["corpus", "run", "nope"]) == 3


def test_full_builtin_corpus_exits_zero(capsys):
    assert main(["corpus", "run", "--parallel", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["exit_code"] == 0 and len(doc["corpus"]) == len(corpus_list())
