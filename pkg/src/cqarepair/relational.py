"""Schemas, tuples, instances, denial constraints, queries and classical evaluation.

Values are plain Python objects: ``str`` for symbols and ``int`` for integers.
Everything here is immutable once built. Evaluation uses a small hash-join
engine (:func:`iter_matches`) that the conflict-hypergraph builder reuses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import QueryError, SchemaError

Value = Union[int, str]

SYM = "sym"
INT = "int"
KINDS = (SYM, INT)

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")
ORDER_OPS = frozenset({"<", "<=", ">", ">="})

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_CAP_IDENT = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
_KEYWORDS = frozenset({"relation", "deny", "fd", "where", "not", "exists", "insert",
                       "delete", "change", "weight", "fixable", "candidates", "rule"})


def value_kind(v: Value) -> str:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SchemaError(f"unsupported value {v!r}: values are symbols (str) or integers")
    return INT if isinstance(v, int) else SYM


def value_key(v: Value):
    """Total order on values: integers first (numerically), then symbols."""
    return (0, v, "") if isinstance(v, int) else (1, 0, v)


def format_value(v: Value, *, bare_lower: bool = True) -> str:
    """Render a constant in DSL syntax.

    With ``bare_lower`` (ground contexts such as facts and update scripts) any
    identifier-like symbol prints bare. Otherwise only capitalized identifiers
    print bare, since lowercase identifiers would read back as variables.
    """
    if isinstance(v, int):
        return str(v)
    pattern = _IDENT if bare_lower else _CAP_IDENT
    if pattern.match(v) and v not in _KEYWORDS:
        return v
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass(frozen=True)
class RelationDef:
    name: str
    attributes: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple((str(a), str(k)) for a, k in self.attributes))
        if not self.attributes:
            raise SchemaError(f"relation {self.name} must have at least one attribute")
        names = [a for a, _ in self.attributes]
        if len(set(names)) != len(names):
            raise SchemaError(f"relation {self.name} has duplicate attribute names")
        for a, k in self.attributes:
            if k not in KINDS:
                raise SchemaError(f"relation {self.name}: unknown kind {k!r} for attribute {a}")

    @property
    def arity(self) -> int:
        return len(self.attributes)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.attributes)

    @property
    def kinds(self) -> tuple[str, ...]:
        return tuple(k for _, k in self.attributes)

    def position(self, attribute: str) -> int:
        for i, (a, _) in enumerate(self.attributes):
            if a == attribute:
                return i
        raise SchemaError(f"relation {self.name} has no attribute {attribute!r}")

    def __str__(self):
        body = ", ".join(f"{a}: {k}" for a, k in self.attributes)
        return f"relation {self.name}({body})"


@dataclass(frozen=True)
class Schema:
    relations: tuple[RelationDef, ...] = ()

    def __post_init__(self):
        rels = tuple(self.relations.values()) if isinstance(self.relations, Mapping) else tuple(self.relations)
        object.__setattr__(self, "relations", rels)
        by_name: dict[str, RelationDef] = {}
        for r in rels:
            if r.name in by_name:
                raise SchemaError(f"duplicate relation {r.name}")
            by_name[r.name] = r
        object.__setattr__(self, "_by_name", by_name)

    def __getitem__(self, name: str) -> RelationDef:
        try:
            return self._by_name[name]
        except KeyError:
            raise SchemaError(f"unknown relation {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._by_name

    def __iter__(self) -> Iterator[RelationDef]:
        return iter(self.relations)

    def __len__(self) -> int:
        return len(self.relations)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.relations)

    @property
    def max_arity(self) -> int:
        return max((r.arity for r in self.relations), default=0)

    def extend(self, *defs: RelationDef) -> "Schema":
        return Schema(self.relations + tuple(defs))

    def replace(self, rel: RelationDef) -> "Schema":
        self[rel.name]
        return Schema(tuple(rel if r.name == rel.name else r for r in self.relations))

    def __str__(self):
        return "\n".join(str(r) for r in self.relations)


@dataclass(frozen=True)
class DbTuple:
    """A ground atom ``R(c1, ..., cn)``."""

    relation: str
    values: tuple

    def __post_init__(self):
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))

    def key(self):
        return (self.relation, tuple(value_key(v) for v in self.values))

    def __lt__(self, other: "DbTuple"):
        return self.key() < other.key()

    def __le__(self, other: "DbTuple"):
        return self.key() <= other.key()

    def __gt__(self, other: "DbTuple"):
        return self.key() > other.key()

    def __ge__(self, other: "DbTuple"):
        return self.key() >= other.key()

    def replace(self, position: int, value: Value) -> "DbTuple":
        vals = list(self.values)
        vals[position] = value
        return DbTuple(self.relation, tuple(vals))

    def __str__(self):
        return f"{self.relation}({','.join(format_value(v) for v in self.values)})"

    __repr__ = __str__


def check_tuple(schema: Schema, t: DbTuple) -> None:
    rel = schema[t.relation]
    if len(t.values) != rel.arity:
        raise SchemaError(f"{t}: arity {len(t.values)} does not match {rel.name}/{rel.arity}")
    for v, k in zip(t.values, rel.kinds):
        if value_kind(v) != k:
            raise SchemaError(f"{t}: value {v!r} is not of kind {k}")


def sort_tuples(tuples: Iterable[DbTuple]) -> list[DbTuple]:
    return sorted(tuples, key=DbTuple.key)


@dataclass(frozen=True)
class DatabaseInstance:
    schema: Schema
    tuples: frozenset = frozenset()

    def __post_init__(self):
        ts = frozenset(self.tuples)
        object.__setattr__(self, "tuples", ts)
        for t in ts:
            check_tuple(self.schema, t)

    @classmethod
    def of(cls, schema: Schema, tuples: Iterable[DbTuple] = ()) -> "DatabaseInstance":
        return cls(schema, frozenset(tuples))

    @cached_property
    def sorted(self) -> tuple[DbTuple, ...]:
        return tuple(sort_tuples(self.tuples))

    def relation(self, name: str) -> tuple[DbTuple, ...]:
        self.schema[name]
        return self.index.relation(name)

    def __iter__(self) -> Iterator[DbTuple]:
        return iter(self.sorted)

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, t) -> bool:
        return t in self.tuples

    def with_tuples(self, tuples: Iterable[DbTuple]) -> "DatabaseInstance":
        return DatabaseInstance(self.schema, frozenset(tuples))

    def add(self, *tuples: DbTuple) -> "DatabaseInstance":
        return self.with_tuples(self.tuples | set(tuples))

    def remove(self, *tuples: DbTuple) -> "DatabaseInstance":
        return self.with_tuples(self.tuples - set(tuples))

    @cached_property
    def index(self) -> "TupleIndex":
        return TupleIndex(self.sorted)

    def __str__(self):
        return "{" + ", ".join(str(t) for t in self.sorted) + "}"


@dataclass(frozen=True)
class SymmetricDifference:
    added: frozenset
    removed: frozenset

    def __post_init__(self):
        if self.added & self.removed:
            raise ValueError("added and removed must be disjoint")

    @property
    def cardinality(self) -> int:
        return len(self.added) + len(self.removed)


def symmetric_difference(d1: DatabaseInstance, d2: DatabaseInstance) -> SymmetricDifference:
    """Tuples of ``d2`` not in ``d1`` (added) and of ``d1`` not in ``d2`` (removed)."""
    if d1.schema != d2.schema:
        raise SchemaError("symmetric difference of instances over different schemas")
    return SymmetricDifference(added=d2.tuples - d1.tuples, removed=d1.tuples - d2.tuples)


# ---------------------------------------------------------------- terms, atoms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: Value

    def __post_init__(self):
        value_kind(self.value)

    def __str__(self):
        return format_value(self.value, bare_lower=False)


Term = Union[Var, Const]


def term(x) -> Term:
    """Coerce a Python value to a term; ``Var``/``Const`` pass through."""
    if isinstance(x, (Var, Const)):
        return x
    return Const(x)


@dataclass(frozen=True)
class Atom:
    relation: str
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(term(t) for t in self.terms))

    @property
    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for t in self.terms:
            if isinstance(t, Var):
                seen.setdefault(t.name)
        return tuple(seen)

    @property
    def is_ground(self) -> bool:
        return all(isinstance(t, Const) for t in self.terms)

    def ground(self, binding: Mapping[str, Value] | None = None) -> DbTuple:
        binding = binding or {}
        vals = []
        for t in self.terms:
            if isinstance(t, Const):
                vals.append(t.value)
            elif t.name in binding:
                vals.append(binding[t.name])
            else:
                raise QueryError(f"variable {t.name} unbound in {self}")
        return DbTuple(self.relation, tuple(vals))

    @classmethod
    def of_tuple(cls, t: DbTuple) -> "Atom":
        return cls(t.relation, tuple(Const(v) for v in t.values))

    def __str__(self):
        return f"{self.relation}({', '.join(str(t) for t in self.terms)})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def __str__(self):
        return str(self.atom) if self.positive else f"not {self.atom}"


def _compare(a: Value, op: str, b: Value) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if not (isinstance(a, int) and isinstance(b, int)):
        raise SchemaError(f"order comparison {a!r} {op} {b!r} needs two integers")
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise SchemaError(f"unknown comparison operator {op!r}")


@dataclass(frozen=True)
class Comparison:
    lhs: Term
    op: str
    rhs: Term

    def __post_init__(self):
        object.__setattr__(self, "lhs", term(self.lhs))
        object.__setattr__(self, "rhs", term(self.rhs))
        if self.op not in COMPARISON_OPS:
            raise SchemaError(f"unknown comparison operator {self.op!r}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(t.name for t in (self.lhs, self.rhs) if isinstance(t, Var)))

    def holds(self, binding: Mapping[str, Value]) -> bool:
        a = self.lhs.value if isinstance(self.lhs, Const) else binding[self.lhs.name]
        b = self.rhs.value if isinstance(self.rhs, Const) else binding[self.rhs.name]
        return _compare(a, self.op, b)

    def __str__(self):
        return f"{self.lhs} {self.op} {self.rhs}"


def _infer_kinds(schema: Schema, atoms: Iterable[Atom], comparisons: Iterable[Comparison]) -> dict[str, str]:
    kinds: dict[str, str] = {}
    for a in atoms:
        rel = schema[a.relation]
        if len(a.terms) != rel.arity:
            raise SchemaError(f"{a}: arity {len(a.terms)} does not match {rel.name}/{rel.arity}")
        for t, k in zip(a.terms, rel.kinds):
            if isinstance(t, Const):
                if value_kind(t.value) != k:
                    raise SchemaError(f"{a}: constant {t} is not of kind {k}")
            elif kinds.setdefault(t.name, k) != k:
                raise SchemaError(f"variable {t.name} used at both {kinds[t.name]} and {k} positions")

    def kind_of(t: Term):
        return value_kind(t.value) if isinstance(t, Const) else kinds.get(t.name)

    for c in comparisons:
        kl, kr = kind_of(c.lhs), kind_of(c.rhs)
        if kl != kr:
            raise SchemaError(f"comparison {c} mixes kinds {kl} and {kr}")
        if c.op in ORDER_OPS and kl != INT:
            raise SchemaError(f"comparison {c}: order operators need integer terms")
    return kinds


@dataclass(frozen=True)
class DenialConstraint:
    """``forall x. not (A1 and ... and Am and comparisons)``."""

    atoms: tuple
    comparisons: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "comparisons", tuple(self.comparisons))
        if not self.atoms:
            raise SchemaError("a denial constraint needs at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise SchemaError("a denial constraint may not repeat an identical atom")
        bound = {v for a in self.atoms for v in a.variables}
        for c in self.comparisons:
            for v in c.variables:
                if v not in bound:
                    raise SchemaError(f"unsafe variable {v} in comparison {c}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(v for a in self.atoms for v in a.variables))

    def check(self, schema: Schema) -> dict[str, str]:
        return _infer_kinds(schema, self.atoms, self.comparisons)

    def __str__(self):
        s = "deny " + ", ".join(str(a) for a in self.atoms)
        if self.comparisons:
            s += " where " + ", ".join(str(c) for c in self.comparisons)
        return s


@dataclass(frozen=True)
class Query:
    """``name(head) := literals where comparisons``.

    Variables that occur in the body but not in the head are existential.
    """

    head: tuple
    literals: tuple
    comparisons: tuple = ()
    name: str = "q"

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "literals", tuple(
            l if isinstance(l, Literal) else Literal(l) for l in self.literals))
        object.__setattr__(self, "comparisons", tuple(self.comparisons))
        if len(set(self.head)) != len(self.head):
            raise QueryError("repeated variable in query head")
        positive = {v for l in self.literals if l.positive for v in l.atom.variables}
        for v in self.head:
            if v not in positive:
                raise QueryError(f"free variable {v} does not occur in a positive literal")
        for l in self.literals:
            if not l.positive:
                for v in l.atom.variables:
                    if v not in positive:
                        raise QueryError(f"variable {v} of negated literal {l.atom} is unbound")
        for c in self.comparisons:
            for v in c.variables:
                if v not in positive:
                    raise QueryError(f"variable {v} of comparison {c} is unbound")

    @property
    def existential(self) -> frozenset:
        body = {v for l in self.literals for v in l.atom.variables}
        return frozenset(body - set(self.head))

    @property
    def is_boolean(self) -> bool:
        return not self.head

    @property
    def is_ground(self) -> bool:
        return all(l.atom.is_ground for l in self.literals) and not any(
            c.variables for c in self.comparisons)

    @property
    def positive_atoms(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.literals if l.positive)

    @property
    def negative_atoms(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.literals if not l.positive)

    def check(self, schema: Schema) -> dict[str, str]:
        return _infer_kinds(schema, [l.atom for l in self.literals], self.comparisons)

    def __str__(self):
        s = f"{self.name}({', '.join(self.head)}) :="
        ex = sorted(self.existential)
        if ex:
            s += " exists " + ", ".join(ex)
        s += " " + ", ".join(str(l) for l in self.literals)
        if self.comparisons:
            s += " where " + ", ".join(str(c) for c in self.comparisons)
        return s


# ------------------------------------------------------------------ evaluation


class TupleIndex:
    """Per-relation tuple lists with lazily built hash indexes on position sets."""

    def __init__(self, tuples: Sequence[DbTuple]):
        by_rel: dict[str, list[DbTuple]] = {}
        for t in tuples:
            by_rel.setdefault(t.relation, []).append(t)
        self._by_rel = {k: tuple(v) for k, v in by_rel.items()}
        self._members = frozenset(tuples)
        self._indexes: dict = {}

    def relation(self, name: str) -> tuple[DbTuple, ...]:
        return self._by_rel.get(name, ())

    def __contains__(self, t) -> bool:
        return t in self._members

    def lookup(self, relation: str, positions: tuple[int, ...], key: tuple) -> Sequence[DbTuple]:
        if not positions:
            return self._by_rel.get(relation, ())
        idx = self._indexes.get((relation, positions))
        if idx is None:
            idx = {}
            for t in self._by_rel.get(relation, ()):
                idx.setdefault(tuple(t.values[p] for p in positions), []).append(t)
            self._indexes[(relation, positions)] = idx
        return idx.get(key, ())


@dataclass(frozen=True)
class _Step:
    atom_pos: int
    relation: str
    lookup_positions: tuple
    key_terms: tuple
    binds: tuple          # (position, var) first occurrences bound by this step
    equals: tuple         # (position, var) repeated occurrences inside the atom
    comparisons: tuple    # comparisons fully bound after this step


@dataclass(frozen=True)
class _Plan:
    initial_comparisons: tuple
    fixed: tuple          # atom positions pre-assigned by the caller
    fixed_binds: tuple    # per fixed atom: ((position, var), ...) in unification order
    steps: tuple


@lru_cache(maxsize=4096)
def _compile(atoms: tuple, comparisons: tuple, fixed: tuple = (), prebound: frozenset = frozenset()) -> _Plan:
    bound = set(prebound)
    fixed_binds = []
    for i in fixed:
        fb = []
        for p, t in enumerate(atoms[i].terms):
            if isinstance(t, Var):
                fb.append((p, t.name))
                bound.add(t.name)
        fixed_binds.append(tuple(fb))
    pending = [c for c in comparisons]
    initial = tuple(c for c in pending if all(v in bound for v in c.variables))
    pending = [c for c in pending if c not in initial]
    remaining = [i for i in range(len(atoms)) if i not in fixed]
    steps = []
    while remaining:
        def boundness(i):
            return sum(1 for t in atoms[i].terms if isinstance(t, Const) or t.name in bound)
        best = max(remaining, key=lambda i: (boundness(i), -i))
        remaining.remove(best)
        a = atoms[best]
        lookup, keys, binds, equals = [], [], [], []
        newly: set[str] = set()
        for p, t in enumerate(a.terms):
            if isinstance(t, Const) or t.name in bound:
                lookup.append(p)
                keys.append(t)
            elif t.name in newly:
                equals.append((p, t.name))
            else:
                binds.append((p, t.name))
                newly.add(t.name)
        bound |= newly
        ready = tuple(c for c in pending if all(v in bound for v in c.variables))
        pending = [c for c in pending if c not in ready]
        steps.append(_Step(best, a.relation, tuple(lookup), tuple(keys), tuple(binds), tuple(equals), ready))
    return _Plan(initial, tuple(fixed), tuple(fixed_binds), tuple(steps))


def iter_matches(index: TupleIndex, atoms: Sequence[Atom], comparisons: Sequence[Comparison] = (),
                 fixed: Mapping[int, DbTuple] | None = None,
                 binding: Mapping[str, Value] | None = None) -> Iterator[tuple[dict, tuple]]:
    """Yield ``(binding, chosen)`` for each assignment of tuples to ``atoms``.

    ``chosen[i]`` is the tuple matched to ``atoms[i]``. Tuples may be reused by
    several atoms. ``fixed`` pins some atoms to given tuples before the join.
    """
    atoms = tuple(atoms)
    fixed = dict(fixed or {})
    binding = dict(binding or {})
    plan = _compile(atoms, tuple(comparisons), tuple(sorted(fixed)), frozenset(binding))
    chosen: list = [None] * len(atoms)

    for i, fb in zip(plan.fixed, plan.fixed_binds):
        t = fixed[i]
        a = atoms[i]
        if t.relation != a.relation or len(t.values) != len(a.terms):
            return
        for p, tm in enumerate(a.terms):
            if isinstance(tm, Const) and tm.value != t.values[p]:
                return
        for p, v in fb:
            val = t.values[p]
            if binding.setdefault(v, val) != val:
                return
        chosen[i] = t
    for c in plan.initial_comparisons:
        if not c.holds(binding):
            return

    steps = plan.steps
    n = len(steps)

    def rec(k):
        if k == n:
            yield dict(binding), tuple(chosen)
            return
        st = steps[k]
        key = tuple(t.value if isinstance(t, Const) else binding[t.name] for t in st.key_terms)
        for t in index.lookup(st.relation, st.lookup_positions, key):
            vals = t.values
            for p, v in st.binds:
                binding[v] = vals[p]
            if all(vals[p] == binding[v] for p, v in st.equals) and all(
                    c.holds(binding) for c in st.comparisons):
                chosen[st.atom_pos] = t
                yield from rec(k + 1)
            for _, v in st.binds:
                del binding[v]
        chosen[st.atom_pos] = None

    yield from rec(0)


def check_constraints(schema: Schema, ic: Iterable[DenialConstraint]) -> tuple[DenialConstraint, ...]:
    ic = tuple(ic)
    for c in ic:
        c.check(schema)
    return ic


def violations(instance: DatabaseInstance, constraint: DenialConstraint) -> Iterator[tuple]:
    """Yield the tuple assignments (one tuple per atom) that violate ``constraint``."""
    for _, chosen in iter_matches(instance.index, constraint.atoms, constraint.comparisons):
        yield chosen


def satisfies(instance: DatabaseInstance, ic: Iterable[DenialConstraint]) -> bool:
    """True iff ``instance`` violates none of the denial constraints."""
    for c in check_constraints(instance.schema, ic):
        for _ in violations(instance, c):
            return False
    return True


def query_answers(instance: DatabaseInstance, q: Query) -> frozenset:
    """Classical answers of ``q`` on ``instance`` as a set of value tuples.

    A boolean query yields ``{()}`` when true and the empty set when false.
    """
    q.check(instance.schema)
    pos = q.positive_atoms
    neg = q.negative_atoms
    # comparisons are pushed into the join, negated literals are checked after it
    out = set()
    for binding, _ in iter_matches(instance.index, pos, q.comparisons):
        if any(a.ground(binding) in instance.tuples for a in neg):
            continue
        out.add(tuple(binding[v] for v in q.head))
    return frozenset(out)


def sort_answers(answers: Iterable[tuple]) -> list[tuple]:
    return sorted(answers, key=lambda row: tuple(value_key(v) for v in row))
