"""CQA after a short update sequence on a consistent instance.

Every violation in ``U(D)`` must use a tuple that ``U`` brought in, because
``D`` itself is consistent and denial constraints are preserved under
deletion. Both algorithms below rely on that: the conflict hypergraph is
built from the new tuples only, and the number of new tuples bounds the
repair distance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from . import hypergraph as hg
from . import kernels
from .errors import InternalConsistencyError, PreconditionError, QueryError, SolverLimitError
from .relational import (
    INT, Atom, DatabaseInstance, DbTuple, DenialConstraint, Literal, Query,
    RelationDef, Schema, Var, check_constraints, satisfies,
)
from .repairs import RepairSet
from .updates import UpdateOp, UpdateSequence, apply_updates


def minimized_updates(u: UpdateSequence, schema: Schema) -> UpdateSequence:
    """The operations that can create violations.

    Deletions are dropped; a change becomes a delete of the old tuple plus an
    insert of the new one (applying the pair gives the same instance).
    """
    ops = []
    for op in u:
        if op.kind == "insert":
            ops.append(op)
        elif op.kind == "change":
            ops.append(UpdateOp("delete", op.target))
            ops.append(UpdateOp("insert", op.changed(schema)))
    return UpdateSequence(ops)


def parameter_bound(u: UpdateSequence, schema: Schema) -> int:
    """Upper end of the distance search: ``m``, or ``m`` times the largest arity with changes."""
    m = len(u)
    return m * schema.max_arity if u.has_changes else m


@dataclass(frozen=True)
class UpdatedProblem:
    """``U(D)``, its conflict hypergraph, and the tuples the update introduced."""

    updated: DatabaseInstance
    hypergraph: hg.ConflictHypergraph
    new_tuples: frozenset
    bound: int


def prepare(d: DatabaseInstance, u: UpdateSequence, ic: Iterable[DenialConstraint],
            check: bool = True) -> UpdatedProblem:
    ic = check_constraints(d.schema, ic)
    if check and not satisfies(d, ic):
        raise PreconditionError("the instance before the update must satisfy the constraints")
    ud = apply_updates(d, u)
    new = ud.tuples - d.tuples
    h = hg.build_hypergraph(ud, ic, seeds=new)
    seeds = {h.vertex_id(t) for t in new}
    for e in h.edges:
        if not e & seeds:
            raise InternalConsistencyError(f"conflict {h.label_set(e)} uses no updated tuple")
    return UpdatedProblem(ud, h, frozenset(new), parameter_bound(u, d.schema))


def incremental_c_repairs_naive(d: DatabaseInstance, u: UpdateSequence, ic: Iterable[DenialConstraint],
                                limits=None) -> RepairSet:
    """C-repairs of ``U(D)`` by trying every deletion set of size 0, 1, ... up to the new-tuple count."""
    limits = hg._limits(limits)
    p = prepare(d, u, ic)
    h = p.hypergraph
    covered = h.covered
    k = len({h.vertex_id(t) for t in p.new_tuples} & set(covered))
    bit = {v: i for i, v in enumerate(covered)}
    masks = [sum(1 << bit[v] for v in e) for e in h.edges]
    found = []
    for size in range(k + 1):
        for combo in itertools.combinations(range(len(covered)), size):
            sel = 0
            for i in combo:
                sel |= 1 << i
            if all(m & sel for m in masks):
                found.append(frozenset(covered[i] for i in combo))
                if len(found) > limits.max_repairs:
                    raise SolverLimitError("repairs", limits.max_repairs, "too many repairs")
        if found:
            reps = tuple(p.updated.remove(*(h.labels[v] for v in s)) for s in found)
            return RepairSet("C", p.updated, reps, size)
    raise InternalConsistencyError("the new tuples in conflicts do not hit every conflict")


def hitting_set_bounded(h: hg.ConflictHypergraph, k: int) -> hg.VertexSet | None:
    """A hitting set of at most ``k`` vertices, or None when there is none."""
    sol = kernels.hitting_set_bounded(h.edge_list, k)
    return None if sol is None else hg.VertexSet(sol)


def _least_k(edges, hi: int) -> int:
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if kernels.hitting_set_bounded(edges, mid) is None:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _lex_least(edges, opt: int) -> list[int]:
    """Smallest-first greedy: keep a vertex whenever an optimum still extends the choice."""
    chosen: list[int] = []
    excluded: set[int] = set()
    rest = [frozenset(e) for e in edges]
    for v in sorted({x for e in edges for x in e}):
        if not rest:
            break
        with_v = [e for e in rest if v not in e]
        sub = [tuple(x for x in e if x not in excluded) for e in with_v]
        if kernels.hitting_set_bounded(sub, opt - len(chosen) - 1) is not None:
            chosen.append(v)
            rest = with_v
        else:
            excluded.add(v)
    if rest:
        raise InternalConsistencyError("greedy witness search left a conflict unhit")
    return chosen


def fpt_min_deletions(d: DatabaseInstance, u: UpdateSequence, ic: Iterable[DenialConstraint],
                      check: bool = True) -> tuple[int, frozenset]:
    """C-repair distance of ``U(D)`` and the lexicographically least optimal deletion set.

    The distance is found by binary search over the parameter range with the
    bounded search-tree decision procedure; its cost is exponential only in
    the number of updates.
    """
    p = prepare(d, u, ic, check)
    edges = p.hypergraph.edge_list
    if kernels.hitting_set_bounded(edges, p.bound) is None:
        raise InternalConsistencyError("no deletion set within the parameter bound")
    opt = _least_k(edges, p.bound)
    witness = _lex_least(edges, opt)
    return opt, p.hypergraph.label_set(witness)


def incremental_certain(q: Query, d: DatabaseInstance, u: UpdateSequence, ic: Iterable[DenialConstraint],
                        check: bool = True) -> bool:
    """C-certainty on ``U(D)`` of a conjunction of ground literals.

    A present tuple is certain when every deletion set avoiding it is larger
    than the optimum; a negated tuple is certain when every optimum deletes it.
    """
    if not q.is_ground or not q.is_boolean:
        raise QueryError("incremental certainty needs a closed query of ground literals")
    q.check(d.schema)
    if not all(c.holds({}) for c in q.comparisons):
        return False
    p = prepare(d, u, ic, check)
    h = p.hypergraph
    edges = h.edge_list
    opt = None
    for l in q.literals:
        t = l.atom.ground()
        present = t in p.updated
        if l.positive and not present:
            return False
        if not present:
            continue
        v = h.vertex_id(t)
        if not h.incidence[v]:
            if not l.positive:
                return False
            continue
        if opt is None:
            opt = _least_k(edges, p.bound)
        if l.positive:
            rest = [e for e in edges if v not in e]
            if kernels.hitting_set_bounded(rest, opt - 1) is not None:
                return False
        else:
            shrunk = [tuple(x for x in e if x != v) for e in edges]
            if all(shrunk) and kernels.hitting_set_bounded(shrunk, opt) is not None:
                return False
    return True


# ---------------------------------------------------------------- control wrapping


@dataclass(frozen=True)
class WrappedProblem:
    """A static problem recast as a single-insert incremental one."""

    schema: Schema
    instance: DatabaseInstance
    constraints: tuple
    query: Query
    update: UpdateSequence
    controlled: dict


def _fresh(taken: set, stem: str) -> str:
    name, i = stem, 1
    while name in taken:
        i += 1
        name = f"{stem}{i}"
    taken.add(name)
    return name


def control_wrap(d: DatabaseInstance, ic: Iterable[DenialConstraint], q: Query) -> WrappedProblem:
    """Recast static S-repair CQA as incremental S-repair CQA.

    Each constraint's first relation gains an integer control column, set to
    1 everywhere; the constraint additionally requires ``Controler(c)`` for
    that control value. With ``Controler`` empty the padded instance is
    consistent, and inserting ``Controler(1)`` brings back exactly the old
    conflicts. Other occurrences of a padded relation get a fresh variable.
    """
    ic = check_constraints(d.schema, ic)
    if q.negative_atoms:
        raise QueryError("control wrapping needs a conjunctive query without negation")
    q.check(d.schema)
    schema = d.schema
    ctl_name = _fresh(set(schema.names), "Controler")
    controlled: dict[str, str] = {}
    for c in ic:
        rel = schema[c.atoms[0].relation]
        if rel.name not in controlled:
            controlled[rel.name] = _fresh(set(rel.attribute_names), "Control")
    new_defs = [RelationDef(r.name, r.attributes + ((controlled[r.name], INT),)) if r.name in controlled else r
                for r in schema]
    wschema = Schema(tuple(new_defs) + (RelationDef(ctl_name, (("A", INT),)),))

    def pad(atom: Atom, var: str) -> Atom:
        if atom.relation not in controlled:
            return atom
        return Atom(atom.relation, atom.terms + (Var(var),))

    constraints = []
    for c in ic:
        taken = set(c.variables)
        contr = _fresh(taken, "contr")
        atoms = [pad(c.atoms[0], contr)]
        atoms += [pad(a, _fresh(taken, "ctl")) if a.relation in controlled else a for a in c.atoms[1:]]
        atoms.append(Atom(ctl_name, (Var(contr),)))
        constraints.append(DenialConstraint(tuple(atoms), c.comparisons))

    taken = set(q.head) | set(q.existential)
    lits = [Literal(pad(l.atom, _fresh(taken, "ctl")) if l.atom.relation in controlled else l.atom, l.positive)
            for l in q.literals]
    wq = Query(q.head, lits, q.comparisons, q.name)

    tuples = [DbTuple(t.relation, t.values + (1,)) if t.relation in controlled else t for t in d]
    inst = DatabaseInstance.of(wschema, tuples)
    update = UpdateSequence([UpdateOp("insert", DbTuple(ctl_name, (1,)))])
    return WrappedProblem(wschema, inst, tuple(constraints), wq, update, controlled)
