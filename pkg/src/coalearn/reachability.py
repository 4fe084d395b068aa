"""Successor operator, reachable part and logical quotients of finite systems."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .systems import (
    Kind,
    PointedSystem,
    check_system,
    local_dynamics,
    restrict,
    successors,
    system_from_local,
    disjoint_union,
)

__all__ = [
    "Partition",
    "gamma",
    "is_subcoalgebra",
    "kleene_chain",
    "reachable_part",
    "bfs_reachable",
    "reachable_subsystem",
    "refinement_history",
    "equivalence_partition",
    "logical_quotient",
    "find_isomorphism",
    "isomorphic",
]


def _ordered(sys: PointedSystem, states: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(states), key=sys.ordinal))


def gamma(sys: PointedSystem, states: Iterable[str]) -> tuple[str, ...]:
    """All one-step successors of ``states``, in ordinal order."""
    return _ordered(sys, (y for x in set(states) for y in successors(sys, x)))


def is_subcoalgebra(sys: PointedSystem, states: Iterable[str]) -> bool:
    states = set(states)
    return set(gamma(sys, states)) <= states


def kleene_chain(sys: PointedSystem) -> Iterator[tuple[str, ...]]:
    """Iterates of ``S -> gamma(S) | {initial}`` starting from the empty set.

    The last element yielded is the least fixpoint.
    """
    current: tuple[str, ...] = ()
    while True:
        nxt = _ordered(sys, gamma(sys, current) + (sys.initial,))
        if nxt == current:
            return
        current = nxt
        yield current


def reachable_part(sys: PointedSystem) -> tuple[str, ...]:
    """Least subcoalgebra containing the initial state."""
    check_system(sys)
    current = ()
    for current in kleene_chain(sys):
        pass
    return current


def bfs_reachable(sys: PointedSystem) -> tuple[str, ...]:
    seen = {sys.initial}
    queue = deque([sys.initial])
    while queue:
        x = queue.popleft()
        for y in successors(sys, x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return _ordered(sys, seen)


def reachable_subsystem(sys: PointedSystem) -> PointedSystem:
    return restrict(sys, reachable_part(sys))


@dataclass(frozen=True)
class Partition:
    """A partition of a system's states into dense-numbered blocks.

    Blocks are numbered in order of their smallest member's ordinal.
    """

    block_of: dict
    blocks: tuple

    @classmethod
    def from_keys(cls, sys: PointedSystem, key) -> "Partition":
        ids: dict = {}
        block_of = {}
        members: list[list[str]] = []
        for x in sys.states:
            k = key(x)
            if k not in ids:
                ids[k] = len(members)
                members.append([])
            block_of[x] = ids[k]
            members[ids[k]].append(x)
        return cls(block_of, tuple(tuple(m) for m in members))

    def __len__(self):
        return len(self.blocks)

    def same(self, x: str, y: str) -> bool:
        return self.block_of[x] == self.block_of[y]

    def as_sets(self) -> set[frozenset]:
        return {frozenset(b) for b in self.blocks}


def _seed_key(sys: PointedSystem):
    if sys.kind is Kind.DFA:
        return sys.is_accepting
    if sys.kind is Kind.MEALY:
        return lambda x: tuple(sys.output(x, a) for a in sys.alphabet)
    return lambda x: ()


def _signature(sys: PointedSystem, part: Partition):
    block = part.block_of
    if sys.kind is Kind.LTS:
        def sig(x):
            return (block[x],) + tuple(
                tuple(sorted({block[y] for y in sys.succ(x, a)})) for a in sys.alphabet
            )
    else:
        def sig(x):
            return (block[x],) + tuple(block[sys.next(x, a)] for a in sys.alphabet)
    return sig


def refinement_history(sys: PointedSystem) -> list[Partition]:
    """Successive partitions of naive partition refinement.

    Element 0 groups states by their immediate observations (acceptance for
    DFAs, the output vector for Mealy machines, nothing for LTSs); element
    ``k + 1`` splits each block of element ``k`` by the blocks reached under
    every letter.  The last element is logical equivalence (language
    equivalence, resp. bisimilarity).
    """
    check_system(sys)
    history = [Partition.from_keys(sys, _seed_key(sys))]
    while True:
        nxt = Partition.from_keys(sys, _signature(sys, history[-1]))
        if len(nxt) == len(history[-1]):
            return history
        history.append(nxt)


def equivalence_partition(sys: PointedSystem) -> Partition:
    return refinement_history(sys)[-1]


def logical_quotient(sys: PointedSystem) -> tuple[Partition, PointedSystem]:
    """Partition of ``sys`` by logical equivalence and the minimised system.

    The minimised system lives on the blocks reachable from the initial
    block; each block is named after its first member.
    """
    part = equivalence_partition(sys)
    name = {i: members[0] for i, members in enumerate(part.blocks)}
    rep = {x: name[part.block_of[x]] for x in sys.states}
    reps = [members[0] for members in part.blocks]
    dynamics = {r: local_dynamics(sys, r).map(rep) for r in reps}
    full = system_from_local(sys, reps, rep[sys.initial], dynamics)
    return part, restrict(full, bfs_reachable(full))


def find_isomorphism(a: PointedSystem, b: PointedSystem) -> dict[str, str] | None:
    """A bijection of states mapping ``a`` onto ``b`` (initial to initial), if any."""
    check_system(a)
    check_system(b)
    if (
        a.kind is not b.kind
        or a.alphabet != b.alphabet
        or len(a.states) != len(b.states)
        or (a.kind is Kind.MEALY and set(a.outputs) != set(b.outputs))
    ):
        return None
    union, lmap, rmap = disjoint_union(a, b)
    part = equivalence_partition(union)
    candidates = {
        x: [y for y in b.states if part.same(lmap[x], rmap[y])] for x in a.states
    }
    if not part.same(lmap[a.initial], rmap[b.initial]):
        return None
    local_a = {x: local_dynamics(a, x) for x in a.states}
    local_b = {y: local_dynamics(b, y) for y in b.states}

    order = [a.initial] + [x for x in bfs_reachable(a) if x != a.initial]
    order += [x for x in a.states if x not in set(order)]
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(x, y):
        la, lb = local_a[x], local_b[y]
        if la.accepting != lb.accepting:
            return False
        for letter in a.alphabet:
            ma, mb = la.moves.get(letter), lb.moves.get(letter)
            if a.kind is Kind.LTS:
                ma, mb = ma or frozenset(), mb or frozenset()
                if len(ma) != len(mb):
                    return False
                if any(t in mapping and mapping[t] not in mb for t in ma):
                    return False
            elif a.kind is Kind.MEALY:
                if ma[0] != mb[0] or (ma[1] in mapping and mapping[ma[1]] != mb[1]):
                    return False
            elif ma in mapping and mapping[ma] != mb:
                return False
        return True

    def verify():
        return all(local_a[x].map(mapping) == local_b[mapping[x]] for x in a.states)

    def search(i):
        if i == len(order):
            return verify()
        x = order[i]
        pool = [b.initial] if x == a.initial else candidates[x]
        for y in pool:
            if y in used or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if search(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return dict(mapping) if search(0) else None


def isomorphic(a: PointedSystem, b: PointedSystem) -> bool:
    return find_isomorphism(a, b) is not None
