"""JSON system documents and Graphviz export.

A system document looks like::

    {
      "kind": "dfa",
      "alphabet": ["a", "b"],
      "states": ["q0", "q1"],
      "initial": "q0",
      "accepting": ["q0"],
      "transitions": {"q0": {"a": "q1", "b": "q0"}, "q1": {"a": "q0", "b": "q1"}}
    }

Mealy documents add ``"outputs"`` and use ``[output, state]`` pairs as
transition values; LTS documents use lists of states.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .exceptions import ParseError
from .systems import Kind, PointedSystem, check_system

__all__ = [
    "parse_system",
    "load_system",
    "export_system",
    "export_dot",
    "fixture_path",
    "resolve_system_path",
]

_KEYS = {"kind", "alphabet", "outputs", "states", "initial", "accepting", "transitions"}


def _string_list(doc, key, required=True):
    if key not in doc:
        if required:
            raise ParseError(f"missing key {key!r}")
        return []
    value = doc[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(f"key {key!r} must be a list of strings")
    return value


def parse_system(text: str, source: str = "<string>") -> PointedSystem:
    """Parse and validate a system document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    unknown = sorted(set(doc) - _KEYS)
    if unknown:
        raise ParseError(f"{source}: unknown key(s) {unknown}")
    try:
        kind = Kind(doc.get("kind"))
    except ValueError:
        raise ParseError(f"{source}: key 'kind' must be one of dfa, mealy, lts") from None
    try:
        alphabet = _string_list(doc, "alphabet")
        states = _string_list(doc, "states")
        outputs = _string_list(doc, "outputs", required=kind is Kind.MEALY)
        accepting = _string_list(doc, "accepting", required=False)
    except ParseError as exc:
        raise ParseError(f"{source}: {exc}") from None
    if kind is not Kind.MEALY and "outputs" in doc:
        raise ParseError(f"{source}: key 'outputs' is only allowed for mealy systems")
    if kind is not Kind.DFA and "accepting" in doc:
        raise ParseError(f"{source}: key 'accepting' is only allowed for dfa systems")
    initial = doc.get("initial")
    if not isinstance(initial, str):
        raise ParseError(f"{source}: key 'initial' must be a state name")
    transitions = doc.get("transitions", {})
    if not isinstance(transitions, dict) or not all(
        isinstance(m, dict) for m in transitions.values()
    ):
        raise ParseError(f"{source}: key 'transitions' must map states to letter maps")
    for x, moves in transitions.items():
        for a, move in moves.items():
            where = f"{source}: transitions[{x!r}][{a!r}]"
            if kind is Kind.DFA and not isinstance(move, str):
                raise ParseError(f"{where} must be a state name")
            if kind is Kind.MEALY and not (
                isinstance(move, list) and len(move) == 2 and all(isinstance(v, str) for v in move)
            ):
                raise ParseError(f"{where} must be an [output, state] pair")
            if kind is Kind.LTS and not (
                isinstance(move, list) and all(isinstance(v, str) for v in move)
            ):
                raise ParseError(f"{where} must be a list of state names")
    sys = PointedSystem(
        kind, alphabet, states, initial, transitions, accepting=accepting, outputs=outputs
    )
    return check_system(sys, source)


def fixture_path(name: str) -> Path:
    """Path of a bundled example system, e.g. ``"mod3.json"``."""
    return Path(str(resources.files("coalearn") / "data" / name))


def resolve_system_path(path: str | Path) -> Path:
    """``path`` itself if it exists, else the bundled fixture of that name."""
    path = Path(path)
    if path.exists():
        return path
    bundled = fixture_path(path.name)
    return bundled if bundled.exists() else path


def load_system(path: str | Path) -> PointedSystem:
    path = resolve_system_path(path)
    return parse_system(path.read_text(encoding="utf-8"), str(path))


def export_system(sys: PointedSystem) -> str:
    """Serialise ``sys`` as a system document with deterministic key order."""
    check_system(sys)
    doc: dict = {"kind": sys.kind.value, "alphabet": list(sys.alphabet)}
    if sys.kind is Kind.MEALY:
        doc["outputs"] = list(sys.outputs)
    doc["states"] = list(sys.states)
    doc["initial"] = sys.initial
    if sys.kind is Kind.DFA:
        doc["accepting"] = [x for x in sys.states if sys.is_accepting(x)]
    transitions = {}
    for x in sys.states:
        if sys.kind is Kind.LTS:
            moves = {
                a: sorted(set(sys.succ(x, a)), key=sys.ordinal)
                for a in sys.alphabet
                if sys.succ(x, a)
            }
        elif sys.kind is Kind.MEALY:
            moves = {a: [sys.output(x, a), sys.next(x, a)] for a in sys.alphabet}
        else:
            moves = {a: sys.next(x, a) for a in sys.alphabet}
        transitions[x] = moves
    doc["transitions"] = transitions
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(sys: PointedSystem, name: str = "system") -> str:
    """Graphviz rendering: one node per state, the initial state marked by an
    incoming arrow, accepting DFA states double-circled."""
    check_system(sys)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for x in sys.states:
        shape = "doublecircle" if sys.kind is Kind.DFA and sys.is_accepting(x) else "circle"
        lines.append(f"  {_quote(x)} [shape={shape}];")
    lines.append(f"  __start -> {_quote(sys.initial)};")
    for x in sys.states:
        for a in sys.alphabet:
            if sys.kind is Kind.LTS:
                for y in sorted(set(sys.succ(x, a)), key=sys.ordinal):
                    lines.append(f"  {_quote(x)} -> {_quote(y)} [label={_quote(a)}];")
            else:
                label = f"{a}/{sys.output(x, a)}" if sys.kind is Kind.MEALY else a
                lines.append(
                    f"  {_quote(x)} -> {_quote(sys.next(x, a))} [label={_quote(label)}];"
                )
    lines.append("}")
    return "\n".join(lines) + "\n"
