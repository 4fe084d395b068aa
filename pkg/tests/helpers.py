"""Independent oracles used by the tests.

None of these share code paths with the package's algorithms beyond reading
system structure.
"""
from __future__ import annotations

import itertools
from collections import deque

from coalearn.logic import And, Bot, Dia, Neg, Or, Top, TOP, BOT
from coalearn.systems import Kind
from coalearn.teacher import EquivalenceAnswer, Teacher


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def run_word(sys, x, word):
    for a in word:
        x = sys.next(x, a)
    return x


def set_semantics(sys, f):
    """Denotation of a formula as a set of states, computed bottom-up."""
    if isinstance(f, Top):
        return set(sys.states)
    if isinstance(f, Bot):
        return set()
    if isinstance(f, Neg):
        return set(sys.states) - set_semantics(sys, f.arg)
    if isinstance(f, Or):
        return set_semantics(sys, f.left) | set_semantics(sys, f.right)
    if isinstance(f, And):
        return set_semantics(sys, f.left) & set_semantics(sys, f.right)
    if isinstance(f, Dia):
        inner = set_semantics(sys, f.arg)
        return {x for x in sys.states if any(y in inner for y in sys.succ(x, f.action))}
    raise TypeError(f)


def bisimilarity(sys):
    """Greatest bisimulation by removing violating pairs until stable."""
    rel = {(x, y) for x in sys.states for y in sys.states}
    changed = True
    while changed:
        changed = False
        for x, y in list(rel):
            ok = all(
                all(any((x2, y2) in rel for y2 in sys.succ(y, a)) for x2 in sys.succ(x, a))
                and all(any((x2, y2) in rel for x2 in sys.succ(x, a)) for y2 in sys.succ(y, a))
                for a in sys.alphabet
            )
            if not ok:
                rel.discard((x, y))
                changed = True
    return rel


def classes_of(sys, rel):
    return {frozenset(y for y in sys.states if (x, y) in rel) for x in sys.states}


def word_equivalent(sys, x, y):
    """Language/output equivalence via all words up to |states| letters."""
    n = len(sys.states)
    for w in all_words(sys.alphabet, n):
        if sys.kind is Kind.DFA:
            if sys.is_accepting(run_word(sys, x, w)) != sys.is_accepting(run_word(sys, y, w)):
                return False
        elif w:
            if sys.output(run_word(sys, x, w[:-1]), w[-1]) != sys.output(run_word(sys, y, w[:-1]), w[-1]):
                return False
    return True


def bfs_states(sys):
    seen, queue = {sys.initial}, deque([sys.initial])
    while queue:
        x = queue.popleft()
        if sys.kind is Kind.LTS:
            nxt = [y for a in sys.alphabet for y in sys.succ(x, a)]
        else:
            nxt = [sys.next(x, a) for a in sys.alphabet]
        for y in nxt:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def random_formula(rng, alphabet, max_size):
    """A random formula with at most ``max_size`` nodes."""
    if max_size <= 1:
        return rng.choice([TOP, BOT])
    choice = rng.randrange(6)
    if choice == 0:
        return rng.choice([TOP, BOT])
    if choice == 1:
        return Neg(random_formula(rng, alphabet, max_size - 1))
    if choice in (2, 3):
        return Dia(rng.choice(alphabet), random_formula(rng, alphabet, max_size - 1))
    if max_size < 3:
        return rng.choice([TOP, BOT])
    left_size = rng.randint(1, max_size - 2)
    left = random_formula(rng, alphabet, left_size)
    right = random_formula(rng, alphabet, max_size - 1 - left.size)
    return (Or if choice == 4 else And)(left, right)


def all_formulas(alphabet, max_size):
    """Every formula with at most ``max_size`` nodes."""
    by_size = {1: [TOP, BOT]}
    for n in range(2, max_size + 1):
        out = [Neg(f) for f in by_size[n - 1]]
        out += [Dia(a, f) for a in alphabet for f in by_size[n - 1]]
        for k in range(1, n - 1):
            for l in by_size[k]:
                for r in by_size[n - 1 - k]:
                    out.append(Or(l, r))
                    out.append(And(l, r))
        by_size[n] = out
    return [f for n in range(1, max_size + 1) for f in by_size[n]]


class ScriptedTeacher(Teacher):
    """Teacher that hands out pre-chosen counterexamples while they still apply."""

    def __init__(self, system, script):
        super().__init__(system)
        self.script = list(script)

    def equivalence_query(self, conj):
        answer = super().equivalence_query(conj)
        if not answer.correct:
            while self.script:
                test = self.script.pop(0)
                if self.verify_counterexample(conj, test):
                    return EquivalenceAnswer(False, test)
        return answer


def brute_eval(sys, x, f):
    """Pointwise recursive evaluation with no memoisation."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Neg):
        return not brute_eval(sys, x, f.arg)
    if isinstance(f, Or):
        return brute_eval(sys, x, f.left) or brute_eval(sys, x, f.right)
    if isinstance(f, And):
        return brute_eval(sys, x, f.left) and brute_eval(sys, x, f.right)
    if isinstance(f, Dia):
        return any(brute_eval(sys, y, f.arg) for y in sys.succ(x, f.action))
    raise TypeError(f)


class RecordingTeacher(Teacher):
    """Teacher that keeps every conjecture it was asked about, with the answer."""

    def __init__(self, system):
        super().__init__(system)
        self.log = []

    def equivalence_query(self, conj):
        answer = super().equivalence_query(conj)
        self.log.append((conj, answer))
        return answer
