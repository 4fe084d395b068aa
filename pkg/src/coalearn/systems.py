"""Finite pointed systems: DFAs, Mealy machines and labelled transition systems.

A :class:`PointedSystem` is an immutable value.  States are identified by
their names; the position of a name in ``states`` is its ordinal, and every
deterministic ordering in the package (successor lists, table scans, exports)
follows ordinals and the order of ``alphabet``.

Transition layout per kind::

    DFA    transitions[state][letter] = target
    MEALY  transitions[state][letter] = (output, target)
    LTS    transitions[state][letter] = (target, ...)   # missing letter == no move
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Callable, Iterable, Mapping

from .exceptions import SystemValidationError, UnclosedTableError, UnknownStateError

__all__ = [
    "Kind",
    "PointedSystem",
    "LocalDynamics",
    "validate_system",
    "check_system",
    "successors",
    "local_dynamics",
    "retarget",
    "disjoint_union",
    "rename_states",
    "restrict",
    "system_from_local",
]


class Kind(str, Enum):
    DFA = "dfa"
    MEALY = "mealy"
    LTS = "lts"

    def __str__(self):
        return self.value


def _freeze_moves(kind, moves):
    if not isinstance(moves, Mapping):
        return moves
    frozen = {}
    for letter, target in moves.items():
        if kind is Kind.MEALY and isinstance(target, (list, tuple)):
            target = tuple(target)
        elif kind is Kind.LTS and isinstance(target, (list, tuple, set, frozenset)):
            target = tuple(target)
        frozen[letter] = target
    return frozen


@dataclass(frozen=True, eq=False)
class PointedSystem:
    """A finite coalgebra of one of three kinds with a distinguished initial state.

    Construction never raises on structural defects so that malformed
    systems can be inspected with :func:`validate_system`; every algorithm in
    the package calls :func:`check_system` on its inputs instead.
    """

    kind: Kind
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: str
    transitions: Mapping[str, Mapping[str, Any]]
    accepting: frozenset[str] = field(default_factory=frozenset)
    outputs: tuple[str, ...] = ()

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "kind", Kind(self.kind))
        set_(self, "alphabet", tuple(self.alphabet))
        set_(self, "states", tuple(self.states))
        set_(self, "accepting", frozenset(self.accepting))
        set_(self, "outputs", tuple(self.outputs))
        set_(
            self,
            "transitions",
            {x: _freeze_moves(self.kind, moves) for x, moves in dict(self.transitions).items()},
        )

    @classmethod
    def dfa(cls, alphabet, states, initial, accepting, transitions):
        return cls(Kind.DFA, alphabet, states, initial, transitions, accepting=accepting)

    @classmethod
    def mealy(cls, alphabet, outputs, states, initial, transitions):
        return cls(Kind.MEALY, alphabet, states, initial, transitions, outputs=outputs)

    @classmethod
    def lts(cls, alphabet, states, initial, transitions):
        return cls(Kind.LTS, alphabet, states, initial, transitions)

    @cached_property
    def ordinals(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def __contains__(self, x):
        return x in self.ordinals

    def ordinal(self, x: str) -> int:
        try:
            return self.ordinals[x]
        except KeyError:
            raise UnknownStateError(x) from None

    def is_accepting(self, x: str) -> bool:
        return x in self.accepting

    def next(self, x: str, letter: str) -> str:
        """Target of ``letter`` at ``x`` (DFA and Mealy)."""
        move = self.transitions[x][letter]
        return move[1] if self.kind is Kind.MEALY else move

    def output(self, x: str, letter: str) -> str:
        return self.transitions[x][letter][0]

    def succ(self, x: str, letter: str) -> tuple[str, ...]:
        """All ``letter``-successors of ``x`` (LTS)."""
        return self.transitions.get(x, {}).get(letter, ())

    def _key(self):
        if self.kind is Kind.LTS:
            moves = {
                x: {a: frozenset(t) for a, t in m.items() if t}
                for x, m in self.transitions.items()
            }
        else:
            moves = self.transitions
        return (
            self.kind,
            self.alphabet,
            self.states,
            self.initial,
            self.accepting,
            self.outputs,
            tuple(sorted((x, tuple(sorted(m.items()))) for x, m in moves.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, PointedSystem):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"PointedSystem(kind={self.kind.value}, states={len(self.states)}, "
            f"alphabet={list(self.alphabet)}, initial={self.initial!r})"
        )


def _duplicates(items):
    seen, dups = set(), []
    for item in items:
        if item in seen and item not in dups:
            dups.append(item)
        seen.add(item)
    return dups


def validate_system(sys: PointedSystem) -> list[str]:
    """Return every invariant violation of ``sys``; an empty list means valid."""
    report = []
    if not sys.alphabet:
        report.append("alphabet is empty")
    for a in _duplicates(sys.alphabet):
        report.append(f"duplicate letter {a!r} in alphabet")
    if not sys.states:
        report.append("no states declared")
    for x in _duplicates(sys.states):
        report.append(f"duplicate state name {x!r}")
    if sys.initial not in sys.ordinals:
        report.append(f"initial state {sys.initial!r} is not a declared state")

    letters = set(sys.alphabet)
    for x, moves in sys.transitions.items():
        if x not in sys.ordinals:
            report.append(f"transitions given for undeclared state {x!r}")
            continue
        if not isinstance(moves, Mapping):
            report.append(f"transitions of state {x!r} are not a letter map")
            continue
        for a in moves:
            if a not in letters:
                report.append(f"transition ({x}, {a}) uses letter outside the alphabet")

    if sys.kind is Kind.DFA:
        for x in sys.accepting:
            if x not in sys.ordinals:
                report.append(f"accepting state {x!r} is not a declared state")
    if sys.kind is Kind.MEALY:
        if not sys.outputs:
            report.append("output alphabet is empty")
        for o in _duplicates(sys.outputs):
            report.append(f"duplicate output symbol {o!r}")
    elif sys.outputs:
        report.append(f"output alphabet given for a {sys.kind.value} system")

    outputs = set(sys.outputs)
    for x in sys.states:
        moves = sys.transitions.get(x, {})
        if not isinstance(moves, Mapping):
            continue
        for a in sys.alphabet:
            if sys.kind is Kind.LTS:
                targets = moves.get(a, ())
                if not isinstance(targets, tuple):
                    report.append(f"transition ({x}, {a}) is not a list of states")
                    continue
                for y in targets:
                    if y not in sys.ordinals:
                        report.append(f"transition ({x}, {a}) targets undeclared state {y!r}")
                continue
            if a not in moves:
                report.append(f"missing transition ({x}, {a})")
                continue
            move = moves[a]
            if sys.kind is Kind.MEALY:
                if not (isinstance(move, tuple) and len(move) == 2):
                    report.append(f"transition ({x}, {a}) is not an [output, state] pair")
                    continue
                out, y = move
                if out not in outputs:
                    report.append(f"transition ({x}, {a}) emits unknown output {out!r}")
            else:
                y = move
            if y not in sys.ordinals:
                report.append(f"transition ({x}, {a}) targets undeclared state {y!r}")
    return report


def check_system(sys: PointedSystem, context: str | None = None) -> PointedSystem:
    """Raise :class:`SystemValidationError` unless ``sys`` is valid; return it otherwise."""
    if not isinstance(sys, PointedSystem):
        raise TypeError(f"expected a PointedSystem, got {type(sys).__name__}")
    report = validate_system(sys)
    if report:
        raise SystemValidationError(report, context)
    return sys


def successors(sys: PointedSystem, x: str) -> tuple[str, ...]:
    """One-step successors of ``x`` over all letters, deduplicated, in ordinal order."""
    sys.ordinal(x)
    if sys.kind is Kind.LTS:
        found = {y for a in sys.alphabet for y in sys.succ(x, a)}
    else:
        found = {sys.next(x, a) for a in sys.alphabet}
    return tuple(sorted(found, key=sys.ordinal))


@dataclass(frozen=True)
class LocalDynamics:
    """The one-step behaviour of a single state.

    ``moves`` maps each letter to a target (DFA), an ``(output, target)`` pair
    (Mealy) or a frozenset of targets (LTS).  ``accepting`` is ``None`` except
    for DFAs.
    """

    kind: Kind
    moves: Mapping[str, Any]
    accepting: bool | None = None

    def targets(self):
        for move in self.moves.values():
            if self.kind is Kind.LTS:
                yield from move
            elif self.kind is Kind.MEALY:
                yield move[1]
            else:
                yield move

    def map(self, rep: Mapping[str, str] | Callable[[str], str]) -> "LocalDynamics":
        f = rep if callable(rep) else rep.__getitem__
        if self.kind is Kind.LTS:
            moves = {a: frozenset(f(y) for y in ys) for a, ys in self.moves.items()}
        elif self.kind is Kind.MEALY:
            moves = {a: (out, f(y)) for a, (out, y) in self.moves.items()}
        else:
            moves = {a: f(y) for a, y in self.moves.items()}
        return LocalDynamics(self.kind, moves, self.accepting)


def local_dynamics(sys: PointedSystem, x: str) -> LocalDynamics:
    sys.ordinal(x)
    if sys.kind is Kind.LTS:
        moves = {a: frozenset(sys.succ(x, a)) for a in sys.alphabet}
        return LocalDynamics(sys.kind, moves)
    moves = {a: sys.transitions[x][a] for a in sys.alphabet}
    if sys.kind is Kind.DFA:
        return LocalDynamics(sys.kind, moves, sys.is_accepting(x))
    return LocalDynamics(sys.kind, moves)


def retarget(sys: PointedSystem, x: str, rep: Mapping[str, str]) -> LocalDynamics:
    """The dynamics of ``x`` with every successor ``y`` replaced by ``rep[y]``."""
    missing = [y for y in successors(sys, x) if y not in rep]
    if missing:
        raise UnclosedTableError(
            f"no representative for successor(s) {missing} of state {x!r}"
        )
    return local_dynamics(sys, x).map(rep)


def system_from_local(
    template: PointedSystem,
    states: Iterable[str],
    initial: str,
    dynamics: Mapping[str, LocalDynamics],
) -> PointedSystem:
    """Assemble a system of ``template``'s kind and alphabets from per-state dynamics."""
    states = tuple(states)
    order = {x: i for i, x in enumerate(states)}
    transitions = {}
    accepting = set()
    for x in states:
        local = dynamics[x]
        if local.kind is Kind.LTS:
            transitions[x] = {
                a: tuple(sorted(ys, key=order.__getitem__))
                for a, ys in local.moves.items()
                if ys
            }
        else:
            transitions[x] = dict(local.moves)
        if local.accepting:
            accepting.add(x)
    return PointedSystem(
        template.kind,
        template.alphabet,
        states,
        initial,
        transitions,
        accepting=accepting,
        outputs=template.outputs,
    )


def rename_states(sys: PointedSystem, names: Mapping[str, str]) -> PointedSystem:
    """Rename every state through ``names`` (a bijection onto new names)."""
    dynamics = {names[x]: local_dynamics(sys, x).map(names) for x in sys.states}
    return system_from_local(sys, [names[x] for x in sys.states], names[sys.initial], dynamics)


def restrict(sys: PointedSystem, states: Iterable[str], initial: str | None = None) -> PointedSystem:
    """The subsystem on ``states``, which must be closed under successors."""
    keep = sorted(set(states), key=sys.ordinal)
    kept = set(keep)
    for x in keep:
        escaped = [y for y in successors(sys, x) if y not in kept]
        if escaped:
            raise ValueError(f"state set is not closed: {x!r} reaches {escaped}")
    dynamics = {x: local_dynamics(sys, x) for x in keep}
    return system_from_local(sys, keep, sys.initial if initial is None else initial, dynamics)


def disjoint_union(
    left: PointedSystem, right: PointedSystem, tags: tuple[str, str] = ("L:", "R:")
) -> tuple[PointedSystem, dict[str, str], dict[str, str]]:
    """Place two systems of the same kind and alphabet side by side.

    Returns the union (pointed at ``left``'s initial state) together with the
    name maps used for each side.
    """
    if left.kind is not right.kind or left.alphabet != right.alphabet:
        raise ValueError("disjoint union needs equal kinds and alphabets")
    lmap = {x: tags[0] + x for x in left.states}
    rmap = {x: tags[1] + x for x in right.states}
    dynamics = {lmap[x]: local_dynamics(left, x).map(lmap) for x in left.states}
    dynamics.update({rmap[x]: local_dynamics(right, x).map(rmap) for x in right.states})
    outputs = tuple(dict.fromkeys(left.outputs + right.outputs))
    template = PointedSystem(left.kind, left.alphabet, (), "", {}, outputs=outputs)
    states = [lmap[x] for x in left.states] + [rmap[x] for x in right.states]
    union = system_from_local(template, states, lmap[left.initial], dynamics)
    return union, lmap, rmap
