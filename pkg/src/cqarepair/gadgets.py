"""Database encodings of graph problems and of C-repairs as attribute repairs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InternalConsistencyError, QueryError
from .graphlab import SimpleGraph
from .relational import (
    INT, SYM, Atom, Comparison, Const, DatabaseInstance, DbTuple, DenialConstraint, Query,
    RelationDef, Schema, Var, check_constraints,
)
from .semantics import ASpec

GRAPH_SCHEMA = Schema((
    RelationDef("Vertex", (("V", SYM),)),
    RelationDef("Edges", (("V1", SYM), ("V2", SYM), ("E", INT))),
    RelationDef("N", (("E", INT),)),
))

EDGE_CONSTRAINT = DenialConstraint((
    Atom("Vertex", (Var("v1"),)),
    Atom("Vertex", (Var("v2"),)),
    Atom("Edges", (Var("v1"), Var("v2"), Var("e"))),
    Atom("N", (Var("e"),)),
))


@dataclass(frozen=True)
class GraphEncoding:
    instance: DatabaseInstance
    constraint: DenialConstraint
    vertex_tuples: dict

    @property
    def constraints(self) -> tuple:
        return (self.constraint,)


def encode_graph(g: SimpleGraph) -> GraphEncoding:
    """Instance whose C-repairs are the maximum independent sets of ``g``.

    Each graph edge is stored ``n`` times with distinct identifiers, so
    breaking a conflict by dropping edge data always costs more than
    dropping vertices.
    """
    if not g.vertices:
        raise ValueError("cannot encode the empty graph")
    n = len(g.vertices)
    vt = {v: DbTuple("Vertex", (v,)) for v in g.vertices}
    tuples = list(vt.values())
    ident = 0
    for a, b in g.edge_list:
        for _ in range(n):
            ident += 1
            tuples.append(DbTuple("Edges", (a, b, ident)))
            tuples.append(DbTuple("N", (ident,)))
    return GraphEncoding(DatabaseInstance.of(GRAPH_SCHEMA, tuples), EDGE_CONSTRAINT, vt)


def decode_repair(encoding: GraphEncoding, repair: DatabaseInstance) -> frozenset:
    """Vertex labels kept by a repair of the encoding."""
    lost = [t for t in encoding.instance if t.relation != "Vertex" and t not in repair]
    if lost:
        raise InternalConsistencyError(f"repair deletes edge data, e.g. {lost[0]}")
    return frozenset(v for v, t in encoding.vertex_tuples.items() if t in repair)


@dataclass(frozen=True)
class FlagImage:
    """Attribute-repair image of a C-repair problem."""

    schema: Schema
    constraints: tuple
    query: Query
    instance: DatabaseInstance
    aspec: ASpec
    flags: dict


def _flag_name(rel: RelationDef) -> str:
    name, i = "E", 1
    while name in rel.attribute_names:
        i += 1
        name = f"E{i}"
    return name


def c_to_a_reduction(schema: Schema, ic: Iterable[DenialConstraint], q: Query,
                     d: DatabaseInstance) -> FlagImage:
    """Give every relation a 0/1 flag that is the only fixable attribute.

    Constraints only fire on flag-1 tuples and all flags start at 1, so
    turning a flag to 0 plays the part of a deletion and the squared cost
    counts deleted tuples.
    """
    ic = check_constraints(schema, ic)
    if len(q.literals) != 1 or not q.literals[0].positive or q.comparisons or not q.is_ground:
        raise QueryError("the reduction needs a single ground atom as query")
    q.check(schema)
    flags = {r.name: _flag_name(r) for r in schema}
    fschema = Schema(tuple(RelationDef(r.name, r.attributes + ((flags[r.name], INT),)) for r in schema))

    constraints = []
    for c in ic:
        taken = set(c.variables)
        atoms, comps = [], list(c.comparisons)
        for a in c.atoms:
            i, var = 1, f"e{len(atoms) + 1}"
            while var in taken:
                i += 1
                var = f"e{len(atoms) + 1}_{i}"
            taken.add(var)
            atoms.append(Atom(a.relation, a.terms + (Var(var),)))
            comps.append(Comparison(Var(var), "=", Const(1)))
        constraints.append(DenialConstraint(tuple(atoms), tuple(comps)))

    atom = q.literals[0].atom
    fq = Query((), [Atom(atom.relation, atom.terms + (Const(1),))], (), q.name)
    inst = DatabaseInstance.of(fschema, (DbTuple(t.relation, t.values + (1,)) for t in d))
    keys = [(r, f) for r, f in flags.items()]
    aspec = ASpec(tuple(keys), tuple((k, (0, 1)) for k in keys), "squared")
    return FlagImage(fschema, tuple(constraints), fq, inst, aspec, flags)
