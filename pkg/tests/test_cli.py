import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import setting_for
from tiltforge import dot, serialize
from tiltforge.cli import COMMANDS, main
from tiltforge.derived import DVertex
from tiltforge.dot import DotSyntaxError, check_dot
from tiltforge.quiver import Quiver
from tiltforge.tilt import maximal_tilted_subalgebras

DATA = Path(__file__).resolve().parent / "data"
D5 = str(DATA / "fix_d5.json")
A3C = str(DATA / "fix_a3c.json")
DIST = str(DATA / "fix_d5_distribution.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def arrow_sets(doc):
    return {frozenset(p["arrows"]) for p in doc["maximal_tilted"]}


# -- commands -------------------------------------------------------------------------


def test_maximal_tilted_d5(capsys):
    code, out, _ = run(capsys, "maximal-tilted", "--quiver", D5, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert arrow_sets(doc) == {frozenset({"4->1"}), frozenset({"2->4", "3->4"}), frozenset({"1->2", "1->3"})}


def test_maximal_tilted_dynkin_and_cycle(capsys):
    code, out, _ = run(capsys, "maximal-tilted", "--dynkin", "A3", "--orientation", "linear")
    assert code == 0 and arrow_sets(json.loads(out)) == {frozenset()}
    code, out, _ = run(capsys, "maximal-tilted", "--quiver", A3C)
    assert len(json.loads(out)["maximal_tilted"]) == 3


def test_maximal_tilted_from_distribution(capsys):
    code, out, _ = run(capsys, "maximal-tilted", "--distribution", DIST)
    assert code == 0
    assert arrow_sets(json.loads(out)) == {frozenset({"4->1"}), frozenset({"2->4", "3->4"}), frozenset({"1->2", "1->3"})}


def test_maximal_tilted_dot_files(capsys, tmp_path):
    code, out, _ = run(capsys, "maximal-tilted", "--quiver", D5, "--format", "both", "--out-dir", str(tmp_path))
    assert code == 0 and json.loads(out)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert len([f for f in files if f.endswith("_slices.dot")]) == 3
    assert len(files) == 6
    for f in tmp_path.iterdir():
        check_dot(f.read_text())
    dashed = [line for line in (tmp_path / "presentation_000.dot").read_text().splitlines() if "style=dashed" in line]
    assert len(dashed) == 2


@pytest.mark.parametrize("arrows, verdict", [("1->2,3->4", "not-tilted"), ("2->4,3->4", "tilted")])
def test_check(capsys, arrows, verdict):
    code, out, _ = run(capsys, "check", "--quiver", D5, "--set", arrows)
    assert code == 0 and out.strip() == verdict


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "--quiver", D5, "--set", "2->4,3->4", "--format", "json")
    assert json.loads(out) == {"relations": ["a2", "a3"], "supporting_slices": 2, "tilted": True}


def test_build_ar_a2(capsys):
    code, out, _ = run(capsys, "build-ar", "--dynkin", "A2")
    assert code == 0
    check_dot(out)
    nodes = [line for line in out.splitlines() if "[label=" in line and "->" not in line]
    assert len(nodes) == 5


def test_build_ar_json(capsys):
    code, out, _ = run(capsys, "build-ar", "--dynkin", "D4", "--format", "json")
    doc = json.loads(out)
    assert len(doc["vertices"]) == 16 and doc["type"] == "D4"


def test_mutate(capsys):
    code, out, _ = run(capsys, "mutate", "--dynkin", "A3", "--vertex", "2")
    q = Quiver.from_json(json.loads(out))
    assert {str(a) for a in q.arrows} == {"2->1", "3->2", "1->3"}


def test_realize_then_slices(capsys, tmp_path):
    code, out, _ = run(capsys, "realize", "--quiver", D5)
    path = tmp_path / "dist.json"
    path.write_text(out)
    code, out, _ = run(capsys, "slices", "--distribution", str(path))
    doc = json.loads(out)
    assert len(doc["slices"]) == 25
    assert len({s["class"] for s in doc["slices"]}) == 3


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--quiver", D5)
    rep = json.loads(out)["report"]
    assert rep["class_count"] == 3 and rep["slice_count"] == 25 and rep["classes_match_annihilators"]


def test_validate_slice(capsys, tmp_path):
    st_ = setting_for("D5")
    good = tmp_path / "good.json"
    good.write_text(json.dumps(serialize.slice_to_json(st_.legal_slices[0].members)))
    code, out, _ = run(capsys, "validate-slice", "--quiver", D5, "--slice", str(good))
    doc = json.loads(out)
    assert doc["local_slice"] and doc["legal"] and doc["relations"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"orbit": "1", "offset": 0}]))
    code, out, _ = run(capsys, "validate-slice", "--quiver", D5, "--slice", str(bad))
    assert json.loads(out)["local_slice"] is False


# -- errors ---------------------------------------------------------------------------------


def test_exit_codes(capsys, tmp_path):
    star = tmp_path / "star.json"
    star.write_text(json.dumps({"arrows": [{"from": "1", "to": str(k)} for k in range(2, 6)]}))
    assert run(capsys, "maximal-tilted", "--quiver", str(star))[0] == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(capsys, "maximal-tilted", "--quiver", str(broken))[0] == 2
    assert run(capsys, "check", "--quiver", D5, "--set", "1->9")[0] == 2
    assert run(capsys, "check", "--quiver", D5, "--set", "4->5")[0] == 2
    code, _, err = run(capsys, "maximal-tilted", "--dynkin", "Q7")
    assert code == 2 and err.startswith("tiltforge:")


def test_exactly_one_input_source(capsys):
    with pytest.raises(SystemExit):
        main(["maximal-tilted", "--quiver", D5, "--dynkin", "A3"])
    with pytest.raises(SystemExit):
        main(["maximal-tilted"])


# -- determinism ------------------------------------------------------------------------------


INVOCATIONS = [
    ["build-ar", "--dynkin", "D4"],
    ["mutate", "--quiver", D5, "--vertex", "4,1"],
    ["realize", "--quiver", D5],
    ["slices", "--quiver", D5],
    ["check", "--quiver", D5, "--set", "2->4,3->4"],
    ["maximal-tilted", "--quiver", D5],
    ["oracle", "--quiver", A3C],
    ["validate-slice", "--quiver", A3C, "--slice", str(DATA / "fix_a3c_slice.json")],
]


def test_every_command_is_covered():
    assert {argv[0] for argv in INVOCATIONS} == set(COMMANDS)


def cli_output(argv, seed):
    env = dict(os.environ, PYTHONHASHSEED=seed)
    r = subprocess.run([sys.executable, "-m", "tiltforge.cli", *argv], env=env, capture_output=True)
    return r.returncode, r.stdout


@pytest.mark.parametrize("argv", INVOCATIONS, ids=lambda a: a[0])
def test_byte_identical_runs(argv):
    first = cli_output(argv, "1")
    assert first[0] == 0 and first[1]
    assert first == cli_output(argv, "2")


# -- serialisation and DOT ---------------------------------------------------------------------


def test_result_round_trip():
    res = maximal_tilted_subalgebras(setting_for("D5"))
    doc = serialize.result_to_json(res)
    q, entries = serialize.result_from_json(json.loads(serialize.dumps(doc)))
    assert q == res.quiver
    assert [set(r) for r, _ in entries] == [set(p.relations) for p in res.presentations]
    assert [[set(c) for c in jp] for _, jp in entries] == [[set(c) for c in p.jump_path] for p in res.presentations]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("12345"), st.integers(-40, 40)), max_size=8))
def test_slice_json_round_trip(pairs):
    members = [DVertex(o, n) for o, n in pairs]
    back = serialize.slice_from_json(json.loads(json.dumps(serialize.slice_to_json(members))))
    assert sorted(back, key=repr) == sorted(members, key=repr)


def test_quiver_dot_is_valid():
    q = setting_for("D5").quiver
    text = dot.quiver_dot(q, {"a4"}, name='odd "name"')
    assert check_dot(text) == len(q.vertices) + len(q.arrows)
    assert text.count("style=dashed") == 1


def test_ar_dot_is_valid():
    st_ = setting_for("D5")
    labels = {v: f"T{a}" for a, v in st_.ct.items}
    text = dot.ar_quiver_dot(st_.model, st_.legal_slices[0].members, st_.tau_t, labels)
    check_dot(text)
    assert text.count("style=filled") == 5 and text.count("shape=box") == 5


@pytest.mark.parametrize(
    "text",
    [
        "graph { a -> b }",
        "digraph { a -- b }",
        "digraph { a -> }",
        "digraph { a [label=] }",
        "digraph { a } extra",
        "digraph { a ",
        "digraph { @ }",
        "tree { }",
    ],
)
def test_dot_checker_rejects(text):
    with pytest.raises(DotSyntaxError):
        check_dot(text)


def test_dot_checker_accepts_attributes():
    assert check_dot('strict digraph G { node [shape=box]; rankdir=LR; "a b" -> c -> d [w=1, x="y"]; }') == 3
