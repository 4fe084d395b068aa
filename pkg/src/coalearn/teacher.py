"""The teacher side of the learning game.

A :class:`Teacher` wraps a finite pointed system and answers four kinds of
queries: rows of test values for selected states (membership), successor
sets (base), whether a conjecture is correct, and counterexamples.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .exceptions import ProtocolError
from .logic import (
    BOT,
    TOP,
    Dia,
    Evaluator,
    Formula,
    Neg,
    Test,
    TestSuite,
    conjunction,
    format_test,
)
from .reachability import refinement_history
from .systems import (
    Kind,
    LocalDynamics,
    PointedSystem,
    check_system,
    disjoint_union,
    local_dynamics,
    successors,
)

__all__ = [
    "Teacher",
    "EquivalenceAnswer",
    "shortest_distinguishing_word",
    "distinguishing_formula",
    "distinguishing_formula_between",
    "minimize_formula",
]


@dataclass(frozen=True)
class EquivalenceAnswer:
    correct: bool
    counterexample: Test | None = None

    def __str__(self):
        return "CORRECT" if self.correct else format_test(self.counterexample)


class Teacher:
    """Answers queries about a hidden system and counts them.

    ``membership_queries`` counts distinct (state, test) cells evaluated for
    the learner, ``base_queries`` counts states whose successors were
    requested, ``equivalence_queries`` counts conjectures submitted.
    """

    def __init__(self, system: PointedSystem):
        self.system = check_system(system, "teacher system")
        self._evaluator = Evaluator(system)
        self.membership_queries = 0
        self.equivalence_queries = 0
        self.base_queries = 0

    @property
    def kind(self) -> Kind:
        return self.system.kind

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.system.alphabet

    @property
    def initial(self) -> str:
        return self.system.initial

    def counters(self) -> dict[str, int]:
        return {
            "membership_queries": self.membership_queries,
            "equivalence_queries": self.equivalence_queries,
            "base_queries": self.base_queries,
        }

    def row(self, x: str, suite: TestSuite) -> tuple:
        return self.fill_rows([x], suite)[x]

    def fill_rows(self, states: Iterable[str], suite: TestSuite) -> dict[str, tuple]:
        ev = self._evaluator
        before = ev.evaluations
        rows = {x: tuple(ev(x, t) for t in suite) for x in states}
        self.membership_queries += ev.evaluations - before
        return rows

    def base_query(self, states: Iterable[str]) -> dict[str, tuple[str, ...]]:
        result = {x: successors(self.system, x) for x in states}
        self.base_queries += len(result)
        return result

    def structure_query(self, states: Iterable[str]) -> dict[str, LocalDynamics]:
        """One-step structure of each state over its successors; counted as base queries."""
        result = {x: local_dynamics(self.system, x) for x in states}
        self.base_queries += len(result)
        return result

    def _check_compatible(self, conj: PointedSystem):
        check_system(conj, "conjecture")
        if conj.kind is not self.kind:
            raise ProtocolError(
                f"conjecture is a {conj.kind.value}, teacher holds a {self.kind.value}"
            )
        if tuple(conj.alphabet) != tuple(self.alphabet):
            raise ProtocolError(
                f"conjecture alphabet {list(conj.alphabet)} differs from {list(self.alphabet)}"
            )

    def equivalence_query(self, conj: PointedSystem) -> EquivalenceAnswer:
        """Compare ``conj`` with the hidden system at their initial states.

        DFA and Mealy counterexamples are the shortlex-least distinguishing
        words; LTS counterexamples are distinguishing formulas.
        """
        self._check_compatible(conj)
        self.equivalence_queries += 1
        if self.kind is Kind.LTS:
            test = distinguishing_formula_between(self.system, conj)
        else:
            test = shortest_distinguishing_word(self.system, conj)
        if test is None:
            return EquivalenceAnswer(True)
        if not self.verify_counterexample(conj, test):
            raise AssertionError(f"synthesised counterexample {format_test(test)} does not distinguish")
        return EquivalenceAnswer(False, test)

    def verify_counterexample(self, conj: PointedSystem, test: Test) -> bool:
        """Whether ``test`` takes different values at the two initial states."""
        return Evaluator(self.system)(self.initial, test) != Evaluator(conj)(conj.initial, test)


def shortest_distinguishing_word(left: PointedSystem, right: PointedSystem):
    """Shortlex-least word on which two DFAs or Mealy machines differ, or ``None``.

    Breadth-first search over the synchronous product, expanding letters in
    alphabet order.
    """
    mealy = left.kind is Kind.MEALY
    start = (left.initial, right.initial)
    if not mealy and left.is_accepting(start[0]) != right.is_accepting(start[1]):
        return ()
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (p, q), word = queue.popleft()
        for a in left.alphabet:
            w = word + (a,)
            if mealy and left.output(p, a) != right.output(q, a):
                return w
            pair = (left.next(p, a), right.next(q, a))
            if pair in seen:
                continue
            if not mealy and left.is_accepting(pair[0]) != right.is_accepting(pair[1]):
                return w
            seen.add(pair)
            queue.append((pair, w))
    return None


def distinguishing_formula(sys: PointedSystem, x: str, y: str) -> Formula | None:
    """A formula true at ``x`` and false at ``y``, or ``None`` if they are bisimilar.

    The formula is read off the refinement history: if ``x`` and ``y`` are
    first separated in round ``k``, some ``a``-successor on one side has no
    round ``k-1`` equivalent on the other, and the recursion descends into
    those successor pairs.  Among the candidates the smallest is kept.
    """
    history = refinement_history(sys)
    final = history[-1]
    if final.same(x, y):
        return None

    def level(u, v):
        return next(k for k, part in enumerate(history) if not part.same(u, v))

    memo: dict = {}

    def dist(u, v) -> Formula:
        key = (u, v)
        if key in memo:
            return memo[key]
        prev = history[level(u, v) - 1]
        best = None
        for a in sys.alphabet:
            us, vs = sys.succ(u, a), sys.succ(v, a)
            for u2 in us:
                if all(not prev.same(u2, v2) for v2 in vs):
                    parts = sorted({dist(u2, v2) for v2 in vs}, key=Formula.sort_key)
                    cand = Dia(a, conjunction(parts))
                    if best is None or cand.sort_key() < best.sort_key():
                        best = cand
            for v2 in vs:
                if all(not prev.same(v2, u2) for u2 in us):
                    parts = sorted({dist(v2, u2) for u2 in us}, key=Formula.sort_key)
                    cand = Neg(Dia(a, conjunction(parts)))
                    if best is None or cand.sort_key() < best.sort_key():
                        best = cand
        memo[key] = best
        return best

    return minimize_formula(sys, x, y, dist(x, y))


def _variants(f: Formula):
    """Formulas obtained from ``f`` by one local simplification."""
    yield TOP
    yield from f.children()
    kids = f.children()
    for i, child in enumerate(kids):
        for v in _variants(child):
            new = list(kids)
            new[i] = v
            if isinstance(f, Dia):
                yield Dia(f.action, new[0])
            else:
                yield type(f)(*new)


def minimize_formula(sys: PointedSystem, x: str, y: str, f: Formula) -> Formula:
    """Greedily shrink ``f`` while it stays true at ``x`` and false at ``y``."""
    ev = Evaluator(sys)

    def separates(g):
        return ev(x, g) is True and ev(y, g) is False

    assert separates(f), f"{f} does not separate {x} from {y}"
    while True:
        better = [g for g in set(_variants(f)) | {BOT} if g.sort_key() < f.sort_key() and separates(g)]
        if not better:
            return f
        f = min(better, key=Formula.sort_key)


def distinguishing_formula_between(left: PointedSystem, right: PointedSystem) -> Formula | None:
    """A formula true at ``left``'s initial state and false at ``right``'s, if any."""
    union, lmap, rmap = disjoint_union(left, right)
    return distinguishing_formula(union, lmap[left.initial], rmap[right.initial])
