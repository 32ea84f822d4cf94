"""Conflict hypergraphs and exact independent-set / hitting-set questions on them.

A hypergraph has integer vertex ids ``0..n-1``, each carrying a label (a
database tuple for conflict hypergraphs, a plain string for graphs). Every
question is answered per connected component; vertices outside all edges are
free. Independent sets and hitting sets are complementary, so each question is
phrased in whichever form the kernels solve directly.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import kernels
from .errors import SolverLimitError
from .relational import DatabaseInstance, DbTuple, DenialConstraint, check_constraints, iter_matches

VertexSet = frozenset


@dataclass(frozen=True)
class SolverLimits:
    """Caps for the exact solvers.

    ``max_vertices`` counts vertices that lie in at least one edge; free
    vertices never enter a search. ``time_budget`` is in seconds per call.
    """

    max_vertices: int = 10_000
    time_budget: float = 10.0
    max_repairs: int = 100_000

    def __post_init__(self):
        if self.max_vertices <= 0 or self.time_budget <= 0 or self.max_repairs <= 0:
            raise ValueError("solver limits must be positive")

    @classmethod
    def from_env(cls) -> "SolverLimits":
        env = os.environ
        return cls(
            max_vertices=int(env.get("CQAREPAIR_MAX_VERTICES", cls.max_vertices)),
            time_budget=float(env.get("CQAREPAIR_TIME_BUDGET", cls.time_budget)),
            max_repairs=int(env.get("CQAREPAIR_MAX_REPAIRS", cls.max_repairs)),
        )

    def deadline(self) -> float:
        return time.monotonic() + self.time_budget


def _limits(limits):
    return limits if limits is not None else SolverLimits.from_env()


class ConflictHypergraph:
    """Immutable hypergraph over labelled vertices.

    ``edges`` is a frozenset of frozensets of vertex ids. Construction keeps
    only inclusion-minimal edges.
    """

    def __init__(self, labels: Sequence, edges: Iterable[Iterable[int]] = ()):
        self.labels = tuple(labels)
        n = len(self.labels)
        es = {frozenset(e) for e in edges}
        for e in es:
            if not e:
                raise ValueError("hyperedges must be non-empty")
            for v in e:
                if not (isinstance(v, int) and 0 <= v < n):
                    raise ValueError(f"edge {sorted(e)} references unknown vertex {v!r}")
        self.edges = frozenset(_minimal_sets(es))
        self._ids = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._ids) != n:
            raise ValueError("vertex labels must be distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def vertex_id(self, label) -> int:
        try:
            return self._ids[label]
        except KeyError:
            raise KeyError(f"{label} is not a vertex") from None

    def label_set(self, vs: Iterable[int]) -> frozenset:
        return frozenset(self.labels[v] for v in vs)

    @cached_property
    def edge_list(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(e)) for e in self.edges))

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        inc = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edge_list):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def covered(self) -> tuple[int, ...]:
        """Vertices that lie in some edge, ascending."""
        return tuple(sorted({v for e in self.edges for v in e}))

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    @cached_property
    def components(self) -> tuple[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]], ...]:
        """Connected components of the covered vertices: ``(vertices, edges)`` pairs."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edge_list:
            r = find(e[0])
            for v in e[1:]:
                s = find(v)
                if s != r:
                    parent[s] = r
        groups: dict[int, list[int]] = {}
        for v in self.covered:
            groups.setdefault(find(v), []).append(v)
        edges_of: dict[int, list] = {}
        for e in self.edge_list:
            edges_of.setdefault(find(e[0]), []).append(e)
        out = [(tuple(vs), tuple(edges_of[r])) for r, vs in groups.items()]
        out.sort()
        return tuple(out)

    def without_vertex(self, v: int) -> "ConflictHypergraph":
        """Drop ``v`` and every edge through it (the vertex stays, isolated and excluded)."""
        return _Reduced(self, [e for e in self.edges if v not in e], frozenset({v}))

    def forcing_vertex(self, v: int) -> "ConflictHypergraph | None":
        """Commit ``v`` to the independent set: edges through ``v`` shrink to ``e - {v}``.

        Returns None when ``v`` forms an edge on its own and so lies in no
        independent set.
        """
        es = []
        for e in self.edges:
            if v in e:
                if len(e) == 1:
                    return None
                es.append(e - {v})
            else:
                es.append(e)
        return _Reduced(self, es, frozenset({v}))

    def __eq__(self, other):
        return isinstance(other, ConflictHypergraph) and self.labels == other.labels and self.edges == other.edges

    def __hash__(self):
        return hash((self.labels, self.edges))

    def __repr__(self):
        return f"ConflictHypergraph(n={self.n}, edges={len(self.edges)})"

    def describe_edges(self) -> list[list]:
        """Edges as sorted lists of labels, in deterministic order."""
        return [[self.labels[v] for v in e] for e in self.edge_list]


class _Reduced(ConflictHypergraph):
    """A derived hypergraph whose ``removed`` vertices are fixed outside the search."""

    def __init__(self, base: ConflictHypergraph, edges, removed: frozenset):
        super().__init__(base.labels, edges)
        self.removed = getattr(base, "removed", frozenset()) | removed

    @property
    def free_count(self) -> int:
        return self.n - len(self.removed)


def _minimal_sets(sets: set[frozenset]) -> list[frozenset]:
    """Inclusion-minimal members of ``sets``."""
    kept: set[frozenset] = set()
    for s in sorted(sets, key=len):
        if len(s) <= 8:
            if any(frozenset(sub) in kept for r in range(1, len(s)) for sub in itertools.combinations(s, r)):
                continue
        elif any(k < s for k in kept):
            continue
        kept.add(s)
    return list(kept)


# ---------------------------------------------------------------- construction


def build_hypergraph(instance: DatabaseInstance, ic: Iterable[DenialConstraint],
                     seeds: Iterable[DbTuple] | None = None) -> ConflictHypergraph:
    """Conflict hypergraph with one vertex per tuple of ``instance`` (in tuple order).

    With ``seeds`` only violations that use at least one seed tuple are
    collected; when ``instance`` minus the seeds satisfies ``ic`` that is the
    whole hypergraph, since every violating set must then contain a seed.
    """
    ic = check_constraints(instance.schema, ic)
    labels = instance.sorted
    ids = {t: i for i, t in enumerate(labels)}
    index = instance.index
    candidates: set[frozenset] = set()
    seed_list = None if seeds is None else sorted(set(seeds) & instance.tuples, key=DbTuple.key)
    for c in ic:
        if seed_list is None:
            matches = (ch for _, ch in iter_matches(index, c.atoms, c.comparisons))
            for chosen in matches:
                candidates.add(frozenset(ids[t] for t in chosen))
            continue
        for pos, atom in enumerate(c.atoms):
            for t in seed_list:
                if t.relation != atom.relation:
                    continue
                for _, chosen in iter_matches(index, c.atoms, c.comparisons, fixed={pos: t}):
                    candidates.add(frozenset(ids[u] for u in chosen))
    return ConflictHypergraph(labels, candidates)


def from_edges(labels: Sequence, edges: Iterable[Iterable]) -> ConflictHypergraph:
    """Hypergraph from label-level edges."""
    ids = {lab: i for i, lab in enumerate(labels)}
    return ConflictHypergraph(labels, [frozenset(ids[x] for x in e) for e in edges])


# ---------------------------------------------------------------- queries


def is_independent(h: ConflictHypergraph, vs: Iterable[int]) -> bool:
    vs = frozenset(vs)
    for v in vs:
        if not (isinstance(v, int) and 0 <= v < h.n):
            raise ValueError(f"unknown vertex id {v!r}")
    return not any(e <= vs for e in h.edges)


def is_hitting_set(h: ConflictHypergraph, vs: Iterable[int]) -> bool:
    vs = frozenset(vs)
    return all(e & vs for e in h.edges)


def _check_size(h: ConflictHypergraph, limits: SolverLimits):
    if len(h.covered) > limits.max_vertices:
        raise SolverLimitError("vertices", limits.max_vertices,
                               f"{len(h.covered)} vertices lie in conflicts")


def _local(component):
    vs, es = component
    pos = {v: i for i, v in enumerate(vs)}
    return len(vs), [[pos[v] for v in e] for e in es]


def _run(fn, limits, *args):
    try:
        return fn(*args)
    except SolverLimitError as e:
        if e.kind == "time":
            raise SolverLimitError("time", limits.time_budget, "exact solver budget exhausted") from None
        raise


# Components larger than this are first split at a cut vertex when one
# leaves no piece bigger than SPLIT_BALANCE of the whole.
SPLIT_MIN_VERTICES = 48
SPLIT_BALANCE = 0.75


def _primal(n: int, es) -> list[set]:
    adj = [set() for _ in range(n)]
    for e in es:
        for a in e:
            adj[a].update(e)
    for v in range(n):
        adj[v].discard(v)
    return adj


def _cut_vertices(n: int, adj) -> list[int]:
    """Articulation points of the primal graph (iterative depth-first search)."""
    disc, low, parent = [-1] * n, [0] * n, [-1] * n
    cuts: set[int] = set()
    clock = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = clock
        clock += 1
        children = 0
        stack = [(root, iter(sorted(adj[root])))]
        while stack:
            u, it = stack[-1]
            for x in it:
                if disc[x] == -1:
                    parent[x] = u
                    disc[x] = low[x] = clock
                    clock += 1
                    children += u == root
                    stack.append((x, iter(sorted(adj[x]))))
                    break
                if x != parent[u]:
                    low[u] = min(low[u], disc[x])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if p != root and low[u] >= disc[p]:
                        cuts.add(p)
        if children > 1:
            cuts.add(root)
    return sorted(cuts)


def _largest_piece(n: int, adj, cut: int) -> int:
    seen = [False] * n
    seen[cut] = True
    best = 0
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        size, todo = 0, [s]
        while todo:
            u = todo.pop()
            size += 1
            for x in adj[u]:
                if not seen[x]:
                    seen[x] = True
                    todo.append(x)
        best = max(best, size)
    return best


def _split_components(n: int, es, w, deadline) -> tuple[int, list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in es:
        for v in e[1:]:
            a, b = find(e[0]), find(v)
            if a != b:
                parent[b] = a
    groups: dict[int, list] = {}
    for e in es:
        groups.setdefault(find(e[0]), []).append(e)
    total, chosen = 0, []
    for ges in groups.values():
        vs = sorted({v for e in ges for v in e})
        pos = {v: i for i, v in enumerate(vs)}
        local = [[pos[v] for v in e] for e in ges]
        lw = None if w is None else [w[v] for v in vs]
        cost, sol = _split_min_hitting_set(len(vs), local, lw, deadline)
        total += cost
        chosen.extend(vs[i] for i in sol)
    return total, chosen


def _split_min_hitting_set(n: int, es, w, deadline) -> tuple[int, list[int]]:
    """Minimum hitting set that branches on a balanced cut vertex of large components.

    Every edge through a cut vertex keeps its other vertices on one side, so
    both branches (take the vertex, or drop it from its edges) fall apart
    into independent pieces.
    """
    if n <= SPLIT_MIN_VERTICES:
        return kernels.min_hitting_set(n, es, w, deadline)
    adj = _primal(n, es)
    best, best_size = None, SPLIT_BALANCE * n
    for c in _cut_vertices(n, adj):
        size = _largest_piece(n, adj, c)
        if size <= best_size:
            best, best_size = c, size
    if best is None:
        return kernels.min_hitting_set(n, es, w, deadline)
    wv = 1 if w is None else w[best]
    cost_in, sol_in = _split_components(n, [e for e in es if best not in e], w, deadline)
    cost_in += wv
    shrunk = [[v for v in e if v != best] for e in es]
    if all(shrunk):
        cost_out, sol_out = _split_components(n, shrunk, w, deadline)
        if cost_out < cost_in:
            return cost_out, sorted(sol_out)
    return cost_in, sorted(sol_in + [best])


def min_weight_hitting_set(h: ConflictHypergraph, weights: Sequence[int] | None = None,
                           limits: SolverLimits | None = None) -> tuple[int, VertexSet]:
    """Exact minimum-weight hitting set ``(cost, vertex set)``; unit weights by default."""
    limits = _limits(limits)
    _check_size(h, limits)
    deadline = limits.deadline()
    total, chosen = 0, []
    for comp in h.components:
        n, es = _local(comp)
        w = None if weights is None else [weights[v] for v in comp[0]]
        cost, sol = _run(_split_min_hitting_set, limits, n, es, w, deadline)
        total += cost
        chosen.extend(comp[0][i] for i in sol)
    return total, VertexSet(chosen)


def min_hitting_set_size(h: ConflictHypergraph, limits: SolverLimits | None = None) -> int:
    return min_weight_hitting_set(h, None, limits)[0]


def max_is_size(h: ConflictHypergraph, limits: SolverLimits | None = None) -> int:
    free = getattr(h, "free_count", h.n)
    return free - min_hitting_set_size(h, limits)


def all_min_weight_hitting_sets(h: ConflictHypergraph, weights: Sequence[int] | None = None,
                                limits: SolverLimits | None = None) -> list[VertexSet]:
    """Every hitting set of minimum total weight, sorted by their ascending id lists."""
    limits = _limits(limits)
    _check_size(h, limits)
    deadline = limits.deadline()
    per_comp = []
    count = 1
    for comp in h.components:
        n, es = _local(comp)
        w = [1] * n if weights is None else [weights[v] for v in comp[0]]
        cost, _ = _run(kernels.min_hitting_set, limits, n, es, w, deadline)
        sols = _run(kernels.all_min_hitting_sets, limits, n, es, w, cost, deadline, limits.max_repairs)
        per_comp.append([[comp[0][i] for i in s] for s in sols])
        count *= len(sols)
        if count > limits.max_repairs:
            raise SolverLimitError("repairs", limits.max_repairs, "too many optimal solutions")
    out = [VertexSet(itertools.chain.from_iterable(p)) for p in itertools.product(*per_comp)]
    return sorted(out, key=lambda s: sorted(s))


def all_minimal_hitting_sets(h: ConflictHypergraph, limits: SolverLimits | None = None) -> list[VertexSet]:
    limits = _limits(limits)
    _check_size(h, limits)
    deadline = limits.deadline()
    per_comp = []
    count = 1
    for comp in h.components:
        n, es = _local(comp)
        sols = _run(kernels.minimal_hitting_sets, limits, n, es, deadline, limits.max_repairs)
        per_comp.append([[comp[0][i] for i in s] for s in sols])
        count *= len(sols)
        if count > limits.max_repairs:
            raise SolverLimitError("repairs", limits.max_repairs, "too many minimal solutions")
    out = [VertexSet(itertools.chain.from_iterable(p)) for p in itertools.product(*per_comp)]
    return sorted(out, key=lambda s: sorted(s))


def lex_least_min_hitting_set(h: ConflictHypergraph, limits: SolverLimits | None = None) -> VertexSet:
    """The minimum-cardinality hitting set whose sorted id list is lexicographically least.

    All optima have equal size, so the least one is decided by the smallest
    vertex where two optima differ; that vertex lies in a single component,
    hence the per-component least solutions combine into the global one.
    """
    limits = _limits(limits)
    _check_size(h, limits)
    deadline = limits.deadline()
    chosen = []
    for comp in h.components:
        n, es = _local(comp)
        cost, _ = _run(kernels.min_hitting_set, limits, n, es, None, deadline)
        sol = _run(kernels.lex_least_min_hitting_set, limits, n, es, None, cost, deadline)
        chosen.extend(comp[0][i] for i in sol)
    return VertexSet(chosen)


def _complement(h: ConflictHypergraph, vs: VertexSet) -> VertexSet:
    removed = getattr(h, "removed", frozenset())
    return VertexSet(v for v in range(h.n) if v not in vs and v not in removed)


def all_maximum_is(h: ConflictHypergraph, limits: SolverLimits | None = None) -> list[VertexSet]:
    """All maximum-cardinality independent sets, sorted by ascending id lists."""
    sets = [_complement(h, s) for s in all_min_weight_hitting_sets(h, None, limits)]
    return sorted(sets, key=lambda s: sorted(s))


def all_maximal_is(h: ConflictHypergraph, limits: SolverLimits | None = None) -> list[VertexSet]:
    """All inclusion-maximal independent sets, sorted by ascending id lists."""
    sets = [_complement(h, s) for s in all_minimal_hitting_sets(h, limits)]
    return sorted(sets, key=lambda s: sorted(s))


def in_all_max_is(h: ConflictHypergraph, v: int, limits: SolverLimits | None = None) -> bool:
    """``v`` is in every maximum independent set iff removing it lowers the optimum."""
    _vertex(h, v)
    return max_is_size(h.without_vertex(v), limits) < max_is_size(h, limits)


def in_some_max_is(h: ConflictHypergraph, v: int, limits: SolverLimits | None = None) -> bool:
    """``v`` is in some maximum independent set iff committing to it loses nothing."""
    _vertex(h, v)
    forced = h.forcing_vertex(v)
    if forced is None:
        return False
    return 1 + max_is_size(forced, limits) == max_is_size(h, limits)


def _vertex(h, v):
    if not (isinstance(v, int) and 0 <= v < h.n):
        raise ValueError(f"unknown vertex id {v!r}")
    if v in getattr(h, "removed", ()):
        raise ValueError(f"vertex {v} was removed from this hypergraph")


# ---------------------------------------------------------------- export


def to_dot(h: ConflictHypergraph, name: str = "conflicts") -> str:
    """DOT text: 2-edges as graph edges, other edges as labelled star nodes."""
    def q(s):
        return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"graph {q(name)} {{"]
    for v, lab in enumerate(h.labels):
        lines.append(f"  v{v} [label={q(lab)}];")
    for i, e in enumerate(h.edge_list):
        if len(e) == 2:
            lines.append(f"  v{e[0]} -- v{e[1]};")
        else:
            lines.append(f"  e{i} [shape=point, xlabel={q(f'e{i}')}];")
            for v in e:
                lines.append(f"  e{i} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
