"""Repairs of an inconsistent instance under S-, C-, weighted-C- and bounded A-semantics.

Tuple-based repairs delete tuples only, so they are sub-instances read off the
conflict hypergraph: S-repairs are its maximal independent sets, C-repairs its
maximum ones, weighted C-repairs the complements of minimum-weight hitting
sets. Attribute-based repairs keep every tuple and search replacement values.
``brute_force_repairs`` recomputes all of these from the definitions alone.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import hypergraph as hg
from .errors import PreconditionError, SolverLimitError
from .relational import (
    DatabaseInstance, DbTuple, DenialConstraint, SymmetricDifference, check_constraints, iter_matches,
    satisfies, symmetric_difference,
)
from .semantics import ASpec, Semantics

BRUTE_FORCE_MAX_TUPLES = 16
BRUTE_FORCE_MAX_COMBINATIONS = 10 ** 6


@dataclass(frozen=True)
class RepairSet:
    """Repairs sorted by their differences from ``original`` (removed, then added, lexicographically)."""

    semantics: str
    original: DatabaseInstance
    repairs: tuple
    distance: int | None = None

    def __post_init__(self):
        uniq = {r.tuples: r for r in self.repairs}
        ordered = sorted(uniq.values(), key=self._order_key)
        object.__setattr__(self, "repairs", tuple(ordered))

    def _order_key(self, r: DatabaseInstance):
        d = symmetric_difference(self.original, r)
        return ([t.key() for t in sorted(d.removed, key=DbTuple.key)],
                [t.key() for t in sorted(d.added, key=DbTuple.key)])

    def __len__(self):
        return len(self.repairs)

    def __iter__(self):
        return iter(self.repairs)

    def __getitem__(self, i):
        return self.repairs[i]

    def __contains__(self, d):
        tuples = d.tuples if isinstance(d, DatabaseInstance) else frozenset(d)
        return any(r.tuples == tuples for r in self.repairs)

    def as_sets(self) -> frozenset:
        return frozenset(r.tuples for r in self.repairs)

    def differences(self) -> list[SymmetricDifference]:
        return [symmetric_difference(self.original, r) for r in self.repairs]

    def same_repairs(self, other: "RepairSet") -> bool:
        return self.as_sets() == other.as_sets() and self.distance == other.distance


def _induced(instance: DatabaseInstance, h: hg.ConflictHypergraph, keep) -> DatabaseInstance:
    return instance.with_tuples(h.labels[v] for v in keep)


def s_repairs(instance: DatabaseInstance, ic: Iterable[DenialConstraint], limits=None) -> RepairSet:
    h = hg.build_hypergraph(instance, ic)
    sets = hg.all_maximal_is(h, limits)
    return RepairSet("S", instance, tuple(_induced(instance, h, s) for s in sets))


def c_repairs(instance: DatabaseInstance, ic: Iterable[DenialConstraint], limits=None) -> RepairSet:
    h = hg.build_hypergraph(instance, ic)
    sets = hg.all_maximum_is(h, limits)
    dist = h.n - len(sets[0])
    return RepairSet("C", instance, tuple(_induced(instance, h, s) for s in sets), dist)


def c_repair_distance(instance: DatabaseInstance, ic: Iterable[DenialConstraint], limits=None) -> int:
    return hg.min_hitting_set_size(hg.build_hypergraph(instance, ic), limits)


def is_c_repair(d: DatabaseInstance, d_prime: DatabaseInstance, ic: Iterable[DenialConstraint],
                limits=None) -> bool:
    if d.schema != d_prime.schema:
        raise PreconditionError("instances are over different schemas")
    if not d_prime.tuples <= d.tuples:
        raise PreconditionError("candidate repair is not a sub-instance")
    ic = tuple(ic)
    return satisfies(d_prime, ic) and len(d.tuples - d_prime.tuples) == c_repair_distance(d, ic, limits)


def _weight_vector(instance: DatabaseInstance, h: hg.ConflictHypergraph, weights: Mapping[DbTuple, int]):
    w = []
    for t in h.labels:
        if t not in weights:
            raise PreconditionError(f"no weight given for {t}")
        x = weights[t]
        if not isinstance(x, int) or isinstance(x, bool) or x <= 0:
            raise PreconditionError(f"weight of {t} must be a positive integer")
        w.append(x)
    return w


def weighted_c_repairs(instance: DatabaseInstance, ic: Iterable[DenialConstraint],
                       weights: Mapping[DbTuple, int], limits=None) -> RepairSet:
    """Consistent sub-instances whose deleted tuples have least total weight."""
    h = hg.build_hypergraph(instance, ic)
    w = _weight_vector(instance, h, weights)
    sols = hg.all_min_weight_hitting_sets(h, w, limits)
    cost = sum(w[v] for v in sols[0])
    keep = [[v for v in range(h.n) if v not in s] for s in sols]
    return RepairSet("wC", instance, tuple(_induced(instance, h, k) for k in keep), cost)


# ---------------------------------------------------------------- attribute repairs


def _variants(t: DbTuple, instance: DatabaseInstance, aspec: ASpec) -> list[tuple[int, DbTuple]]:
    """Every value assignment for the fixable attributes of ``t`` with its cost, cheapest first."""
    rel = instance.schema[t.relation]
    slots = []
    for rname, attr in aspec.fixable:
        if rname == t.relation:
            p = rel.position(attr)
            vals = list(aspec.candidates_for(rname, attr))
            if t.values[p] not in vals:
                vals.append(t.values[p])
            slots.append((p, vals))
    out = []
    for choice in itertools.product(*(vals for _, vals in slots)):
        vals = list(t.values)
        cost = 0
        for (p, _), new in zip(slots, choice):
            old = vals[p]
            if new != old:
                cost += 1 if aspec.rule == "unit" else (new - old) ** 2
            vals[p] = new
        out.append((cost, DbTuple(t.relation, tuple(vals))))
    out.sort(key=lambda cv: (cv[0], cv[1].key()))
    return out


class _GrowingIndex:
    """Minimal index for the join engine over a multiset that grows and shrinks."""

    def __init__(self, tuples=()):
        self.by_rel: dict[str, list[DbTuple]] = {}
        for t in tuples:
            self.add(t)

    def add(self, t):
        self.by_rel.setdefault(t.relation, []).append(t)

    def pop(self, t):
        self.by_rel[t.relation].pop()

    def lookup(self, relation, positions, key):
        rows = self.by_rel.get(relation, ())
        if not positions:
            return rows
        return [t for t in rows if tuple(t.values[p] for p in positions) == key]


def _violates_with(index, ic, t) -> bool:
    for c in ic:
        for pos, atom in enumerate(c.atoms):
            if atom.relation == t.relation:
                for _ in iter_matches(index, c.atoms, c.comparisons, fixed={pos: t}):
                    return True
    return False


def a_repairs_bounded(instance: DatabaseInstance, ic: Iterable[DenialConstraint], aspec: ASpec,
                      limits=None) -> RepairSet:
    """Minimum-cost attribute repairs over finite candidate domains.

    Depth-first over the tuples that carry fixable attributes, cheapest
    replacement first; a branch dies when its cost passes the best found or
    when the tuples fixed so far already violate a constraint (denials are
    monotone, so no completion could repair that).
    """
    ic = check_constraints(instance.schema, ic)
    aspec.check(instance.schema)
    limits = hg._limits(limits)
    fixable_rels = {r for r, _ in aspec.fixable}
    movable = [t for t in instance if t.relation in fixable_rels]
    fixed = [t for t in instance if t.relation not in fixable_rels]
    variants = [_variants(t, instance, aspec) for t in movable]
    width = max((len(v) for v in variants), default=1)
    if len(movable) * width > BRUTE_FORCE_MAX_COMBINATIONS:
        raise SolverLimitError("search", BRUTE_FORCE_MAX_COMBINATIONS,
                               f"{len(movable)} tuples x {width} variants")
    if not satisfies(instance.with_tuples(fixed), ic):
        # no value change can touch these violations
        return RepairSet("A", instance, (), None)

    deadline = limits.deadline()
    index = _GrowingIndex(fixed)
    best = [None]
    found: dict[frozenset, int] = {}
    chosen: list[DbTuple] = []
    nodes = [0]

    def rec(i, cost):
        nodes[0] += 1
        if nodes[0] % 256 == 0 and time.monotonic() > deadline:
            raise SolverLimitError("time", limits.time_budget, "attribute repair search")
        if best[0] is not None and cost > best[0]:
            return
        if i == len(movable):
            final = frozenset(fixed) | frozenset(chosen)
            if best[0] is None or cost < best[0]:
                best[0] = cost
                found.clear()
            found[final] = cost
            return
        for c, t in variants[i]:
            if best[0] is not None and cost + c > best[0]:
                break
            if _violates_with(_Peek(index, t), ic, t):
                continue
            chosen.append(t)
            index.add(t)
            rec(i + 1, cost + c)
            index.pop(t)
            chosen.pop()

    rec(0, 0)
    if best[0] is None:
        return RepairSet("A", instance, (), None)
    return RepairSet("A", instance, tuple(instance.with_tuples(f) for f in found), best[0])


class _Peek:
    """``index`` plus one extra tuple, without mutating ``index``."""

    def __init__(self, index, extra):
        self.index = index
        self.extra = extra

    def lookup(self, relation, positions, key):
        rows = self.index.lookup(relation, positions, key)
        t = self.extra
        if t.relation == relation and tuple(t.values[p] for p in positions) == key:
            return list(rows) + [t]
        return rows


# ---------------------------------------------------------------- dispatch and oracle


def repairs(instance: DatabaseInstance, ic: Iterable[DenialConstraint], semantics: Semantics,
            limits=None) -> RepairSet:
    if semantics.kind == "S":
        return s_repairs(instance, ic, limits)
    if semantics.kind == "C":
        return c_repairs(instance, ic, limits)
    if semantics.kind == "wC":
        return weighted_c_repairs(instance, ic, semantics.weights, limits)
    return a_repairs_bounded(instance, ic, semantics.aspec, limits)


def _consistent_subsets(instance: DatabaseInstance, ic) -> list[frozenset]:
    """All consistent sub-instances, grown tuple by tuple (supersets of violators are skipped)."""
    ts = instance.sorted
    out = []

    def rec(i, cur):
        if i == len(ts):
            out.append(frozenset(cur))
            return
        rec(i + 1, cur)
        cur.append(ts[i])
        if satisfies(instance.with_tuples(cur), ic):
            rec(i + 1, cur)
        cur.pop()

    rec(0, [])
    return out


def brute_force_repairs(instance: DatabaseInstance, ic: Iterable[DenialConstraint],
                        semantics: Semantics) -> RepairSet:
    """Repairs computed straight from the minimality definitions by exhaustive search."""
    ic = check_constraints(instance.schema, ic)
    n = len(instance)
    if n > BRUTE_FORCE_MAX_TUPLES:
        raise SolverLimitError("tuples", BRUTE_FORCE_MAX_TUPLES, f"instance has {n} tuples")
    if semantics.kind == "A":
        return _brute_force_a(instance, ic, semantics.aspec)
    subsets = _consistent_subsets(instance, ic)
    if semantics.kind == "S":
        reps = [s for s in subsets if not any(s < o for o in subsets)]
        return RepairSet("S", instance, tuple(instance.with_tuples(s) for s in reps))
    if semantics.kind == "C":
        cost = {s: n - len(s) for s in subsets}
    else:
        w = semantics.weights
        missing = [t for t in instance.tuples if t not in w]
        if missing:
            raise PreconditionError(f"no weight given for {missing[0]}")
        cost = {s: sum(w[t] for t in instance.tuples - s) for s in subsets}
    best = min(cost.values())
    reps = [s for s in subsets if cost[s] == best]
    return RepairSet(semantics.kind, instance, tuple(instance.with_tuples(s) for s in reps), best)


def _brute_force_a(instance, ic, aspec: ASpec) -> RepairSet:
    aspec.check(instance.schema)
    per_tuple = []
    total = 1
    for t in instance:
        rel = instance.schema[t.relation]
        slots = []
        for r, a in aspec.fixable:
            if r == t.relation:
                p = rel.position(a)
                slots.append((p, sorted(set(aspec.candidates_for(r, a)) | {t.values[p]}, key=str)))
        options = []
        for choice in itertools.product(*(vals for _, vals in slots)):
            vals = list(t.values)
            for (p, _), v in zip(slots, choice):
                vals[p] = v
            new = DbTuple(t.relation, tuple(vals))
            cost = sum(
                0 if a == b else (1 if aspec.rule == "unit" else (a - b) ** 2)
                for a, b in zip(t.values, new.values))
            options.append((new, cost))
        per_tuple.append(options)
        total *= len(options)
    if total > BRUTE_FORCE_MAX_COMBINATIONS:
        raise SolverLimitError("search", BRUTE_FORCE_MAX_COMBINATIONS, f"{total} value assignments")
    best = None
    reps: set[frozenset] = set()
    for combo in itertools.product(*per_tuple):
        cost = sum(c for _, c in combo)
        if best is not None and cost > best:
            continue
        final = frozenset(t for t, _ in combo)
        if not satisfies(instance.with_tuples(final), ic):
            continue
        if best is None or cost < best:
            best, reps = cost, set()
        reps.add(final)
    return RepairSet("A", instance, tuple(instance.with_tuples(s) for s in reps), best)
