"""Observation tables and the learning loop.

A table pairs a list of selected teacher states with a closed suite of
tests.  The loop closes the table by pulling in successors whose rows are
new, builds a conjecture on the selected states, asks the teacher whether it
is correct and, if not, adds the counterexample with its closure to the
suite.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Any, Callable, NamedTuple

from .exceptions import InvariantViolation, UnclosedTableError
from .logic import Evaluator, Test, TestSuite, check_test, closure, format_test, theory_row
from .systems import PointedSystem, successors, system_from_local
from .teacher import Teacher

__all__ = [
    "Table",
    "LearnConfig",
    "TraceEvent",
    "RunTrace",
    "LearnResult",
    "init_table",
    "closedness_witness",
    "is_closed",
    "close_step",
    "close_table",
    "build_conjecture",
    "add_counterexample",
    "check_table_invariants",
    "learn",
]


def _jsonable(value):
    return value if isinstance(value, (bool, int, float, str)) or value is None else str(value)


@dataclass(frozen=True)
class Table:
    """Selected states (rows) and a test suite (columns) with cached rows.

    ``selected[0]`` is always the teacher's initial state; the remaining
    states are kept in the order they were discovered.
    """

    selected: tuple[str, ...]
    suite: TestSuite
    rows: tuple[tuple, ...]
    initial_index: int = 0

    @property
    def initial(self) -> str:
        return self.selected[self.initial_index]

    def row_of(self, x: str) -> tuple:
        return self.rows[self.selected.index(x)]

    def row_index(self) -> dict[tuple, str]:
        return {row: x for x, row in zip(self.selected, self.rows)}

    def is_sharp(self) -> bool:
        return len(set(self.rows)) == len(self.rows)

    def __len__(self):
        return len(self.selected)

    def as_dict(self) -> dict[str, dict[str, Any]]:
        """``{state: {test text: value}}`` for display and tests."""
        names = self.suite.format()
        return {x: dict(zip(names, row)) for x, row in zip(self.selected, self.rows)}


@dataclass
class LearnConfig:
    check_invariants: bool = False
    max_outer_iterations: int | None = None


@dataclass(frozen=True)
class TraceEvent:
    event: str
    data: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"event": self.event, **self.data}


@dataclass
class RunTrace:
    """Append-only log of one learning run."""

    events: list[TraceEvent] = field(default_factory=list)
    counters: dict[str, int] = field(default_factory=dict)
    outer_iterations: int = 0
    closing_rounds: int = 0
    states_added: int = 0

    def add(self, event: str, **data):
        self.events.append(TraceEvent(event, data))

    def of_kind(self, event: str) -> list[TraceEvent]:
        return [e for e in self.events if e.event == event]

    def to_records(self) -> list[dict]:
        return [e.to_record() for e in self.events]

    def write_ndjson(self, fh: IO[str]):
        for record in self.to_records():
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


class LearnResult(NamedTuple):
    conjecture: PointedSystem
    trace: RunTrace


def _snapshot(trace: RunTrace | None, table: Table, phase: str):
    if trace is not None:
        trace.add(
            "table",
            phase=phase,
            selected=list(table.selected),
            suite=table.suite.format(),
        )


def init_table(teacher: Teacher) -> Table:
    suite = TestSuite(teacher.kind, (), teacher.alphabet)
    rows = teacher.fill_rows([teacher.initial], suite)
    return Table((teacher.initial,), suite, (rows[teacher.initial],))


def closedness_witness(table: Table, teacher: Teacher) -> tuple[str, str] | None:
    """First ``(state, successor)`` whose successor row is missing, or ``None`` if closed."""
    known = set(table.rows)
    base = teacher.base_query(table.selected)
    for x in table.selected:
        succ_rows = teacher.fill_rows(base[x], table.suite)
        for y in base[x]:
            if succ_rows[y] not in known:
                return x, y
    return None


def is_closed(table: Table, teacher: Teacher) -> bool:
    return closedness_witness(table, teacher) is None


def close_step(table: Table, teacher: Teacher) -> tuple[Table, list[tuple[str, str, tuple]]]:
    """Add one representative for each new row among the successors.

    Returns the extended table and the additions as ``(state, parent, row)``.
    """
    selected, rows = list(table.selected), list(table.rows)
    known = set(rows)
    base = teacher.base_query(table.selected)
    added = []
    for x in table.selected:
        succ_rows = teacher.fill_rows(base[x], table.suite)
        for y in base[x]:
            row = succ_rows[y]
            if row not in known:
                known.add(row)
                selected.append(y)
                rows.append(row)
                added.append((y, x, row))
    if not added:
        return table, added
    return Table(tuple(selected), table.suite, tuple(rows), table.initial_index), added


def close_table(
    table: Table,
    teacher: Teacher,
    trace: RunTrace | None = None,
    on_step: Callable[[Table], None] | None = None,
) -> Table:
    """Apply :func:`close_step` until no successor has a new row."""
    while True:
        table, added = close_step(table, teacher)
        if not added:
            return table
        if trace is not None:
            trace.closing_rounds += 1
            trace.states_added += len(added)
            for y, x, row in added:
                trace.add(
                    "closing_addition",
                    state=y,
                    parent=x,
                    row=[_jsonable(v) for v in row],
                )
        if on_step is not None:
            on_step(table)


def build_conjecture(table: Table, teacher: Teacher) -> PointedSystem:
    """The system on the selected states with successors redirected to row-equal states."""
    index = table.row_index()
    structure = teacher.structure_query(table.selected)
    dynamics = {}
    for x in table.selected:
        local = structure[x]
        targets = list(dict.fromkeys(local.targets()))
        succ_rows = teacher.fill_rows(targets, table.suite)
        rep = {}
        for y in targets:
            try:
                rep[y] = index[succ_rows[y]]
            except KeyError:
                raise UnclosedTableError(
                    f"successor {y!r} of {x!r} has no matching row; close the table first"
                ) from None
        dynamics[x] = local.map(rep)
    return system_from_local(teacher.system, table.selected, table.initial, dynamics)


def add_counterexample(table: Table, test: Test, teacher: Teacher) -> Table:
    """Extend the suite by ``test`` and its closure and recompute the rows."""
    check_test(test, teacher.kind, teacher.alphabet)
    suite = table.suite.union(closure([test], teacher.kind, teacher.alphabet))
    if suite.tests == table.suite.tests:
        return table
    rows = teacher.fill_rows(table.selected, suite)
    return Table(table.selected, suite, tuple(rows[x] for x in table.selected), table.initial_index)


def check_table_invariants(table: Table, teacher: Teacher):
    """Raise :class:`InvariantViolation` unless the table is sharp, correctly
    pointed and prefix-closed, with a decomposition-closed suite."""
    if not table.is_sharp():
        raise InvariantViolation(f"table is not sharp: rows {table.rows}")
    if table.initial != teacher.initial or table.initial_index != 0:
        raise InvariantViolation(
            f"initial row {table.initial!r} is not the teacher's initial {teacher.initial!r}"
        )
    if not table.suite.is_closed():
        raise InvariantViolation(f"suite {table.suite.format()} is not closed")
    sys = teacher.system
    ev = Evaluator(sys)
    if any(theory_row(sys, x, table.suite, ev) != row for x, row in zip(table.selected, table.rows)):
        raise InvariantViolation("cached rows differ from the teacher's theory")
    reached = set()
    for i, x in enumerate(table.selected):
        if i > 0 and x not in reached:
            raise InvariantViolation(
                f"selected state {x!r} is not a successor of earlier selected states"
            )
        reached.update(successors(sys, x))


def learn(teacher: Teacher, config: LearnConfig | None = None) -> LearnResult:
    """Learn a minimal reachable system equivalent to the teacher's.

    Raises :class:`InvariantViolation` if an invariant check fails or the
    number of outer iterations exceeds ``config.max_outer_iterations``
    (default: number of teacher states plus one).
    """
    config = config or LearnConfig()
    limit = config.max_outer_iterations
    if limit is None:
        limit = len(teacher.system.states) + 1
    trace = RunTrace()

    def checked(table):
        if config.check_invariants:
            check_table_invariants(table, teacher)
        return table

    table = checked(init_table(teacher))
    _snapshot(trace, table, "init")
    while True:
        if trace.outer_iterations >= limit:
            raise InvariantViolation(
                f"no correct conjecture after {limit} equivalence queries"
            )
        trace.outer_iterations += 1
        table = close_table(table, teacher, trace, on_step=checked)
        _snapshot(trace, table, "closed")
        conj = build_conjecture(table, teacher)
        trace.add("conjecture", states=list(conj.states))
        answer = teacher.equivalence_query(conj)
        trace.add(
            "equivalence",
            correct=answer.correct,
            counterexample=None if answer.correct else format_test(answer.counterexample),
        )
        if answer.correct:
            trace.counters = teacher.counters()
            trace.add("finished", states=list(conj.states), **trace.counters)
            return LearnResult(conj, trace)
        table = checked(add_counterexample(table, answer.counterexample, teacher))
        trace.add(
            "counterexample_added",
            test=format_test(answer.counterexample),
            suite_size=len(table.suite),
        )
        _snapshot(trace, table, "counterexample")
