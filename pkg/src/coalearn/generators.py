"""Random finite systems for property tests and benchmarks."""
from __future__ import annotations

import random

from .systems import PointedSystem

__all__ = ["random_dfa", "random_mealy", "random_lts", "random_system"]

_LETTERS = "abcdefgh"


def _names(n, prefix):
    return [f"{prefix}{i}" for i in range(n)]


def random_dfa(rng: random.Random, n_states: int, n_letters: int, p_accept: float = 0.5):
    states = _names(n_states, "q")
    alphabet = list(_LETTERS[:n_letters])
    accepting = [x for x in states if rng.random() < p_accept]
    transitions = {x: {a: rng.choice(states) for a in alphabet} for x in states}
    return PointedSystem.dfa(alphabet, states, states[0], accepting, transitions)


def random_mealy(rng: random.Random, n_states: int, n_letters: int, n_outputs: int):
    states = _names(n_states, "m")
    alphabet = list(_LETTERS[:n_letters])
    outputs = [f"o{i}" for i in range(n_outputs)]
    transitions = {
        x: {a: (rng.choice(outputs), rng.choice(states)) for a in alphabet} for x in states
    }
    return PointedSystem.mealy(alphabet, outputs, states, states[0], transitions)


def random_lts(rng: random.Random, n_states: int, n_letters: int, max_branching: int):
    states = _names(n_states, "x")
    alphabet = list(_LETTERS[:n_letters])
    transitions = {}
    for x in states:
        moves = {}
        for a in alphabet:
            k = rng.randint(0, min(max_branching, n_states))
            if k:
                moves[a] = tuple(sorted(rng.sample(states, k), key=states.index))
        transitions[x] = moves
    return PointedSystem.lts(alphabet, states, states[0], transitions)


def random_system(rng: random.Random, kind: str, max_states: int = 8, max_letters: int = 3,
                  max_outputs: int = 3, max_branching: int = 3) -> PointedSystem:
    """A random system of ``kind`` with sizes drawn uniformly up to the given bounds."""
    n = rng.randint(1, max_states)
    k = rng.randint(1, max_letters)
    if kind == "dfa":
        return random_dfa(rng, n, k)
    if kind == "mealy":
        return random_mealy(rng, n, k, rng.randint(1, max_outputs))
    if kind == "lts":
        return random_lts(rng, n, k, max_branching)
    raise ValueError(f"unknown kind {kind!r}")
