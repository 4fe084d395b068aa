"""Tests for the three logics and their evaluation.

* DFA tests are words over the alphabet (the empty word included); a word
  holds at a state when the state accepts it.
* Mealy tests are non-empty words; their value at a state is the output
  emitted on the last letter.
* LTS tests are Hennessy-Milner formulas built from ``T``, ``F``, ``~p``,
  ``(p|q)``, ``(p&q)`` and ``<a>p``.

Words are tuples of letters.  A collection of tests used as table columns
must be closed under decomposition: suffixes for words, immediate
subformulas for formulas.  :class:`TestSuite` holds such a collection in a
canonical order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence, Union

from .exceptions import MalformedTestError
from .systems import Kind, PointedSystem

__all__ = [
    "Formula",
    "Top",
    "Bot",
    "Neg",
    "Or",
    "And",
    "Dia",
    "TOP",
    "BOT",
    "Word",
    "Test",
    "TestSuite",
    "parse_formula",
    "parse_word",
    "parse_test",
    "format_word",
    "format_test",
    "check_test",
    "suffix_closure",
    "subformula_closure",
    "closure",
    "Evaluator",
    "eval_test",
    "theory_row",
    "conjunction",
]

Word = tuple  # tuple[str, ...]


class Formula:
    """Base class of modal formulas; subclasses are immutable and hashable."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children())

    def subformulas(self) -> Iterator["Formula"]:
        """All subformulas, including ``self``, in pre-order."""
        yield self
        for child in self.children():
            yield from child.subformulas()

    def actions(self) -> set[str]:
        return {f.action for f in self.subformulas() if isinstance(f, Dia)}

    def sort_key(self):
        return (self.size, str(self))


@dataclass(frozen=True, slots=True)
class Top(Formula):
    def __str__(self):
        return "T"


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    def __str__(self):
        return "F"


@dataclass(frozen=True, slots=True)
class Neg(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"~{self.arg}"


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left}|{self.right})"


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left}&{self.right})"


@dataclass(frozen=True, slots=True)
class Dia(Formula):
    action: str
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"<{self.action}>{self.arg}"


TOP = Top()
BOT = Bot()

Test = Union[Word, Formula]


def conjunction(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction of ``formulas``; ``T`` when empty."""
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TOP if result is None else result


# --- textual syntax -------------------------------------------------------

_ALIASES = {"⊤": "T", "⊥": "F", "¬": "~", "∨": "|", "∧": "&", "⟨": "<", "⟩": ">"}


class _FormulaParser:
    def __init__(self, text):
        for k, v in _ALIASES.items():
            text = text.replace(k, v)
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise MalformedTestError(f"{msg} at position {self.pos} in formula {self.text!r}")

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        f = self.formula()
        if self.peek():
            self.error("trailing input")
        return f

    def formula(self):
        ch = self.peek()
        if ch == "T":
            self.pos += 1
            return TOP
        if ch == "F":
            self.pos += 1
            return BOT
        if ch == "~":
            self.pos += 1
            return Neg(self.formula())
        if ch == "<":
            self.pos += 1
            end = self.text.find(">", self.pos)
            if end < 0:
                self.error("unterminated modality")
            action = self.text[self.pos:end].strip()
            if not action:
                self.error("empty action in modality")
            self.pos = end + 1
            return Dia(action, self.formula())
        if ch == "(":
            self.pos += 1
            left = self.formula()
            op = self.peek()
            if op not in ("|", "&"):
                self.error("expected '|' or '&'")
            self.pos += 1
            right = self.formula()
            self.expect(")")
            return Or(left, right) if op == "|" else And(left, right)
        self.error("unexpected character" if ch else "unexpected end of input")


def parse_formula(text: str) -> Formula:
    """Parse the textual formula syntax, e.g. ``"<a><b>T"`` or ``"~(<a>F|T)"``."""
    return _FormulaParser(text).parse()


_EMPTY_WORD = {"", '""', "''", "ε", "eps"}


def parse_word(text: str, alphabet: Sequence[str] | None = None) -> Word:
    """Parse a word.

    Letters may be separated by whitespace, ``.`` or ``,``; without separators
    each character is one letter, which requires single-character letters.
    """
    text = text.strip()
    if text in _EMPTY_WORD:
        return ()
    if re.search(r"[\s.,]", text):
        word = tuple(p for p in re.split(r"[\s.,]+", text) if p)
    else:
        word = tuple(text)
    if alphabet is not None:
        bad = [a for a in word if a not in alphabet]
        if bad:
            raise MalformedTestError(f"letters {bad} of word {text!r} are not in the alphabet")
    return word


def format_word(word: Word) -> str:
    if not word:
        return '""'
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return ".".join(word)


def format_test(test: Test) -> str:
    return str(test) if isinstance(test, Formula) else format_word(test)


def parse_test(text: str, sys: PointedSystem) -> Test:
    """Parse ``text`` as a test of ``sys``'s logic and validate it."""
    if sys.kind is Kind.LTS:
        test = parse_formula(text)
    else:
        test = parse_word(text, sys.alphabet)
    check_test(test, sys.kind, sys.alphabet)
    return test


def check_test(test: Test, kind: Kind, alphabet: Sequence[str]) -> Test:
    """Raise :class:`MalformedTestError` unless ``test`` belongs to the logic of ``kind``."""
    letters = set(alphabet)
    if kind is Kind.LTS:
        if not isinstance(test, Formula):
            raise MalformedTestError(f"LTS tests are modal formulas, got {test!r}")
        bad = test.actions() - letters
        if bad:
            raise MalformedTestError(f"formula {test} uses unknown actions {sorted(bad)}")
        return test
    if not isinstance(test, tuple) or not all(isinstance(a, str) for a in test):
        raise MalformedTestError(f"{kind.value} tests are words (tuples of letters), got {test!r}")
    if kind is Kind.MEALY and not test:
        raise MalformedTestError("Mealy tests must be non-empty words")
    bad = [a for a in test if a not in letters]
    if bad:
        raise MalformedTestError(f"word {format_word(test)} uses letters {bad} outside the alphabet")
    return test


# --- closures -------------------------------------------------------------


def _word_key(alphabet):
    if alphabet is None:
        return lambda w: (len(w), w)
    index = {a: i for i, a in enumerate(alphabet)}
    return lambda w: (len(w), tuple(index[a] for a in w))


@dataclass(frozen=True)
class TestSuite:
    """A finite decomposition-closed set of tests in canonical order.

    Words are ordered shortlex (by alphabet position), formulas by size and
    then by their textual form.
    """

    __test__ = False  # not a pytest class

    kind: Kind
    tests: tuple = ()
    alphabet: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "tests", tuple(sorted(set(self.tests), key=self.sort_key)))

    @property
    def sort_key(self):
        if self.kind is Kind.LTS:
            return Formula.sort_key
        return _word_key(self.alphabet)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.tests)

    def __iter__(self):
        return iter(self.tests)

    def __len__(self):
        return len(self.tests)

    def __contains__(self, test: Hashable):
        return test in self._members

    def __getitem__(self, i):
        return self.tests[i]

    def index(self, test) -> int:
        return self.tests.index(test)

    def union(self, other: Iterable[Test]) -> "TestSuite":
        return TestSuite(self.kind, self.tests + tuple(other), self.alphabet)

    def issubset(self, other: "TestSuite") -> bool:
        return self._members <= other._members

    def is_closed(self) -> bool:
        """Whether every immediate decomposition of a member is a member."""
        if self.kind is Kind.LTS:
            return all(c in self for f in self.tests for c in f.children())
        minimum = 2 if self.kind is Kind.MEALY else 1
        return all(w[1:] in self for w in self.tests if len(w) >= minimum)

    def format(self) -> list[str]:
        return [format_test(t) for t in self.tests]


def suffix_closure(
    words: Iterable[Word],
    alphabet: Sequence[str] | None = None,
    nonempty: bool = False,
) -> TestSuite:
    """Smallest suffix-closed set containing ``words``.

    With ``nonempty`` (Mealy tests) the empty word is left out.
    """
    found = set()
    for w in words:
        w = tuple(w)
        if alphabet is not None:
            check_test(w, Kind.DFA, alphabet)
        for i in range(len(w) + 1):
            found.add(w[i:])
    if nonempty:
        found.discard(())
    kind = Kind.MEALY if nonempty else Kind.DFA
    return TestSuite(kind, tuple(found), None if alphabet is None else tuple(alphabet))


def subformula_closure(
    formulas: Iterable[Formula], alphabet: Sequence[str] | None = None
) -> TestSuite:
    """Smallest set containing ``formulas`` and closed under immediate subformulas."""
    found = set()
    for f in formulas:
        if alphabet is not None:
            check_test(f, Kind.LTS, alphabet)
        elif not isinstance(f, Formula):
            raise MalformedTestError(f"not a modal formula: {f!r}")
        found.update(f.subformulas())
    return TestSuite(Kind.LTS, tuple(found), None if alphabet is None else tuple(alphabet))


def closure(tests: Iterable[Test], kind: Kind, alphabet: Sequence[str]) -> TestSuite:
    """Dispatch to the closure matching ``kind``."""
    kind = Kind(kind)
    if kind is Kind.LTS:
        return subformula_closure(tests, alphabet)
    tests = list(tests)
    for t in tests:
        check_test(t, kind, alphabet)
    return suffix_closure(tests, alphabet, nonempty=kind is Kind.MEALY)


# --- semantics ------------------------------------------------------------


class Evaluator:
    """Memoising evaluator of tests on one system.

    ``cache`` maps ``(state, test)`` to the truth value; ``evaluations``
    counts how many distinct top-level cells were computed.
    """

    def __init__(self, sys: PointedSystem):
        self.sys = sys
        self.cache: dict = {}
        self.evaluations = 0

    def __call__(self, x: str, test: Test):
        key = (x, test)
        try:
            return self.cache[key]
        except KeyError:
            pass
        self.sys.ordinal(x)
        check_test(test, self.sys.kind, self.sys.alphabet)
        value = self._eval(x, test)
        self.evaluations += 1
        return value

    def _eval(self, x, test):
        sys = self.sys
        if sys.kind is Kind.LTS:
            return self._holds(x, test)
        y = x
        if sys.kind is Kind.DFA:
            for a in test:
                y = sys.next(y, a)
            value = sys.is_accepting(y)
        else:
            for a in test[:-1]:
                y = sys.next(y, a)
            value = sys.output(y, test[-1])
        self.cache[(x, test)] = value
        return value

    def _holds(self, x, f) -> bool:
        key = (x, f)
        try:
            return self.cache[key]
        except KeyError:
            pass
        if isinstance(f, Top):
            value = True
        elif isinstance(f, Bot):
            value = False
        elif isinstance(f, Neg):
            value = not self._holds(x, f.arg)
        elif isinstance(f, Or):
            value = self._holds(x, f.left) or self._holds(x, f.right)
        elif isinstance(f, And):
            value = self._holds(x, f.left) and self._holds(x, f.right)
        elif isinstance(f, Dia):
            value = any(self._holds(y, f.arg) for y in self.sys.succ(x, f.action))
        else:
            raise MalformedTestError(f"unknown formula node {f!r}")
        self.cache[key] = value
        return value


def eval_test(sys: PointedSystem, x: str, test: Test):
    """Truth value of ``test`` at state ``x``: a bool, or an output symbol for Mealy."""
    return Evaluator(sys)(x, test)


def theory_row(
    sys: PointedSystem, x: str, suite: TestSuite, evaluator: Evaluator | None = None
) -> tuple:
    """Values of all tests of ``suite`` at ``x``, aligned with the suite order."""
    if suite.tests and suite.kind is not sys.kind:
        raise MalformedTestError(
            f"{suite.kind.value} test suite used with a {sys.kind.value} system"
        )
    ev = evaluator or Evaluator(sys)
    return tuple(ev(x, t) for t in suite)
