import io
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from coalearn.cli import main
from coalearn.exceptions import ParseError, SystemValidationError
from coalearn.generators import random_dfa, random_lts, random_mealy
from coalearn.io import export_dot, export_system, fixture_path, load_system, parse_system
from coalearn.reachability import isomorphic, logical_quotient
from coalearn.systems import Kind

from helpers import all_words, bisimilarity, classes_of, run_word


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_mod3_fixture(mod3):
    assert mod3.kind is Kind.DFA
    assert len(mod3.states) == 9
    for w in all_words("ab", 12):
        assert mod3.is_accepting(run_word(mod3, "q0", w)) == (w.count("a") % 3 == 0)


def test_lts_fixture(paper_lts):
    assert paper_lts.kind is Kind.LTS
    assert len(paper_lts.states) == 9
    assert classes_of(paper_lts, bisimilarity(paper_lts)) == {
        frozenset({"x0"}), frozenset({"x1", "x2"}), frozenset({"x3", "x5"}),
        frozenset({"x4", "x6", "x7", "x8"}),
    }


def test_initial_defect_names_initial():
    doc = json.loads(fixture_path("mod3.json").read_text())
    doc["initial"] = "nowhere"
    with pytest.raises(SystemValidationError, match="initial"):
        parse_system(json.dumps(doc))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("{", "line 1"),
        ("[]", "top level"),
        ('{"kind": "nfa"}', "kind"),
        ('{"kind": "dfa", "alphabet": "ab"}', "alphabet"),
        ('{"kind": "dfa", "alphabet": ["a"], "states": ["q"], "initial": "q", "bogus": 1}', "bogus"),
        ('{"kind": "dfa", "alphabet": ["a"], "states": ["q"], "initial": "q",'
         ' "transitions": {"q": {"a": ["q"]}}}', "transitions['q']['a']"),
        ('{"kind": "lts", "alphabet": ["a"], "states": ["q"], "initial": "q", "accepting": []}',
         "accepting"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        parse_system(text)
    assert fragment in str(info.value)


def _random_system(seed):
    rng = random.Random(seed)
    kind = rng.choice("dml")
    n = rng.randint(1, 7)
    if kind == "d":
        return random_dfa(rng, n, rng.randint(1, 3))
    if kind == "m":
        return random_mealy(rng, n, rng.randint(1, 3), rng.randint(1, 3))
    return random_lts(rng, n, rng.randint(1, 3), 3)


def test_round_trip_fixtures(mod3, paper_lts):
    for sys in (mod3, paper_lts):
        back = parse_system(export_system(sys))
        assert back == sys
        assert isomorphic(back, sys)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_round_trip_random(seed):
    sys = _random_system(seed)
    text = export_system(sys)
    back = parse_system(text)
    assert back == sys
    assert export_system(back) == text
    assert export_dot(back) == export_dot(sys)


def test_dot_for_learned_dfa(tmp_path):
    dot = tmp_path / "m.dot"
    code, _ = run(["learn", "--teacher", "mod3.json", "--output", str(tmp_path / "m.json"),
                   "--dot", str(dot)])
    assert code == 0
    text = dot.read_text()
    assert '"s2" -> "s0" [label="a"];' in text
    assert '"s0" [shape=doublecircle];' in text
    assert text.count("[shape=circle]") == 2
    assert "__start -> \"s0\";" in text


def test_dot_for_quotient_uses_state_names(mod3):
    _, q = logical_quotient(mod3)
    assert '"q2" -> "q0" [label="a"];' in export_dot(q)


def test_dot_for_learned_lts(tmp_path):
    dot = tmp_path / "l.dot"
    code, _ = run(["learn", "--teacher", "paper_lts.json", "--output", str(tmp_path / "l.json"),
                   "--dot", str(dot)])
    assert code == 0
    nodes = [ln for ln in dot.read_text().splitlines() if "[shape=circle]" in ln]
    assert len(nodes) == 4


def test_dot_mealy_labels():
    sys = random_mealy(random.Random(3), 2, 1, 1)
    assert '[label="a/o0"]' in export_dot(sys)


def test_dot_is_deterministic(paper_lts):
    assert export_dot(paper_lts) == export_dot(load_system(fixture_path("paper_lts.json")))


def test_cli_learn_mod3(tmp_path):
    trace = tmp_path / "t.ndjson"
    out_file = tmp_path / "m.json"
    code, out = run(["learn", "--teacher", "mod3.json", "--output", str(out_file),
                     "--trace", str(trace), "--check-invariants"])
    assert code == 0
    lines = dict(ln.split(": ") for ln in out.splitlines())
    assert lines["states"] == "3"
    assert lines["equivalence_queries"] == "2"
    learned = load_system(out_file)
    assert learned.states == ("s0", "s1", "s2")
    assert learned.accepting == frozenset({"s0"})
    records = [json.loads(ln) for ln in trace.read_text().splitlines()]
    assert sum(r["event"] == "equivalence" for r in records) == int(lines["equivalence_queries"])
    finished = next(r for r in records if r["event"] == "finished")
    for key in ("membership_queries", "equivalence_queries", "base_queries"):
        assert str(finished[key]) == lines[key]
    naming = next(r for r in records if r["event"] == "naming")
    assert naming["names"] == {"s0": "q0", "s1": "q1", "s2": "q2"}


def test_cli_learn_to_stdout():
    code, out = run(["learn", "--teacher", "paper_lts.json"])
    assert code == 0
    doc = json.loads(out[: out.index("states:")])
    assert doc["kind"] == "lts"
    assert len(doc["states"]) == 4
    assert "equivalence_queries: 2" in out


def test_cli_eval():
    assert run(["eval", "--teacher", "paper_lts.json", "--state", "x0", "--test", "<a><b>T"]) == (0, "true\n")
    assert run(["eval", "--teacher", "paper_lts.json", "--state", "x0", "--test", "<b>T"]) == (0, "false\n")
    assert run(["eval", "--teacher", "mod3.json", "--state", "q0", "--test", '""']) == (0, "true\n")
    assert run(["eval", "--teacher", "mod3.json", "--state", "q0", "--test", "aa"]) == (0, "false\n")


def test_cli_equiv(tmp_path):
    assert run(["equiv", "mod3.json", "mod3.json"]) == (0, "CORRECT\n")
    one = tmp_path / "one.json"
    one.write_text(json.dumps({
        "kind": "dfa", "alphabet": ["a", "b"], "states": ["q0"], "initial": "q0",
        "accepting": ["q0"], "transitions": {"q0": {"a": "q0", "b": "q0"}},
    }))
    assert run(["equiv", "mod3.json", str(one)]) == (0, "counterexample: a\n")


def test_cli_minimize(tmp_path):
    code, out = run(["minimize", "--input", "paper_lts.json"])
    assert code == 0
    assert out.endswith("states: 4\n")
    doc = json.loads(out[: out.index("states:")])
    assert doc["states"] == ["x0", "x1", "x3", "x4"]


def test_cli_exit_codes(tmp_path, capsys):
    assert run(["eval", "--teacher", "mod3.json", "--state", "zz", "--test", "a"])[0] == 1
    assert run(["eval", "--teacher", "mod3.json", "--state", "q0", "--test", "<a>T"])[0] == 1
    assert run(["learn", "--teacher", str(tmp_path / "missing.json")])[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["learn", "--teacher", str(bad)])[0] == 1
    assert run(["equiv", "mod3.json", "paper_lts.json"])[0] == 1
    assert run(["learn", "--teacher", "mod3.json", "--max-outer-iterations", "1"])[0] == 2
    err = capsys.readouterr().err
    assert "internal error" in err
    assert "line 1" in err
