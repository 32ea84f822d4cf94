"""Certain and possible answers over repairs, plus the enumeration-free paths."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import hypergraph as hg
from .errors import PreconditionError, QueryError
from .relational import DatabaseInstance, DenialConstraint, Query, query_answers, sort_answers
from .repairs import RepairSet, repairs
from .semantics import C, Semantics


@dataclass(frozen=True)
class AnswerSet:
    """Answers of ``mode`` (certain or possible); closed queries hold ``{()}`` for yes."""

    answers: frozenset
    semantics: str
    mode: str
    boolean: bool = False

    @property
    def yes(self) -> bool:
        return bool(self.answers)

    def rows(self) -> list[tuple]:
        return sort_answers(self.answers)

    def __contains__(self, row):
        return tuple(row) in self.answers

    def __len__(self):
        return len(self.answers)


def _rep(instance, ic, semantics, limits, rep: RepairSet | None) -> RepairSet:
    r = rep if rep is not None else repairs(instance, ic, semantics, limits)
    if not len(r):
        raise PreconditionError("no repair exists under these settings")
    return r


def certain_answers(q: Query, instance: DatabaseInstance, ic: Iterable[DenialConstraint],
                    semantics: Semantics = C, limits=None, rep: RepairSet | None = None) -> AnswerSet:
    """Answers that hold in every repair (intersection over the repair set)."""
    q.check(instance.schema)
    common = None
    for r in _rep(instance, ic, semantics, limits, rep):
        a = query_answers(r, q)
        common = a if common is None else common & a
        if not common:
            break
    return AnswerSet(frozenset(common), semantics.kind, "certain", q.is_boolean)


def possible_answers(q: Query, instance: DatabaseInstance, ic: Iterable[DenialConstraint],
                     semantics: Semantics = C, limits=None, rep: RepairSet | None = None) -> AnswerSet:
    """Answers that hold in at least one repair."""
    q.check(instance.schema)
    out: set = set()
    for r in _rep(instance, ic, semantics, limits, rep):
        out |= query_answers(r, q)
    return AnswerSet(frozenset(out), semantics.kind, "possible", q.is_boolean)


def _ground_literals(q: Query, instance: DatabaseInstance):
    if not q.is_ground or not q.is_boolean:
        raise QueryError("the fast path needs a closed query of ground literals")
    q.check(instance.schema)
    if not all(c.holds({}) for c in q.comparisons):
        return None
    return [(l.atom.ground(), l.positive) for l in q.literals]


def certain_c_fast(q: Query, instance: DatabaseInstance, ic: Iterable[DenialConstraint], limits=None) -> bool:
    """C-certainty of a conjunction of ground literals from optimum sizes alone.

    Certainty distributes over conjunction, so each literal is decided on its
    own: a present tuple must lie in every maximum independent set, a negated
    tuple must be absent or lie in none.
    """
    lits = _ground_literals(q, instance)
    if lits is None:
        return False
    h = hg.build_hypergraph(instance, ic)
    for t, positive in lits:
        if positive:
            if t not in instance or not hg.in_all_max_is(h, h.vertex_id(t), limits):
                return False
        elif t in instance and hg.in_some_max_is(h, h.vertex_id(t), limits):
            return False
    return True


def certain_s_atomic_fast(q: Query, instance: DatabaseInstance, ic: Iterable[DenialConstraint]) -> bool:
    """S-certainty of a ground atom: the tuple is present and in no conflict.

    A tuple outside every hyperedge extends every independent set, so it is
    in all maximal ones; a tuple inside some edge is left out of the maximal
    set grown from the rest of that edge.
    """
    if len(q.literals) != 1 or not q.literals[0].positive or q.comparisons:
        raise QueryError("the S fast path needs a single ground atom")
    lits = _ground_literals(q, instance)
    t = lits[0][0]
    if t not in instance:
        return False
    h = hg.build_hypergraph(instance, ic)
    return not h.incidence[h.vertex_id(t)]
