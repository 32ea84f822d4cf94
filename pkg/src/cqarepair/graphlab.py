"""Plain-graph constructions for reasoning about maximum independent sets.

Every construction returns a new graph; inputs are never modified. Added
vertices get labels of the form ``__aux/N`` that cannot clash with the input.

The four membership questions for a vertex ``v`` of ``g`` used throughout:

* certain positive: ``v`` is in every maximum independent set
* certain negative: ``v`` is in no maximum independent set
* possible negative: some maximum independent set omits ``v``
* possible positive: some maximum independent set contains ``v``
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from . import hypergraph as hg

_AUX = re.compile(r"__aux/(\d+)\Z")


@dataclass(frozen=True)
class SimpleGraph:
    vertices: tuple
    edges: frozenset = frozenset()

    def __post_init__(self):
        vs = tuple(str(v) for v in self.vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertex labels")
        es = frozenset(frozenset(str(x) for x in e) for e in self.edges)
        known = set(vs)
        for e in es:
            if len(e) != 2:
                raise ValueError(f"edge {sorted(e)} is a self-loop or malformed")
            for x in e:
                if x not in known:
                    raise ValueError(f"edge endpoint {x!r} is not a vertex")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)

    @classmethod
    def of(cls, vertices: Iterable, edges: Iterable = ()) -> "SimpleGraph":
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    @classmethod
    def complete(cls, n: int, prefix: str = "v") -> "SimpleGraph":
        vs = [f"{prefix}{i}" for i in range(n)]
        return cls.of(vs, itertools.combinations(vs, 2))

    @classmethod
    def edgeless(cls, n: int, prefix: str = "v") -> "SimpleGraph":
        return cls.of([f"{prefix}{i}" for i in range(n)])

    @cached_property
    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for a, b in (tuple(e) for e in self.edges):
            adj[a].add(b)
            adj[b].add(a)
        return {v: frozenset(n) for v, n in adj.items()}

    def neighbours(self, v) -> frozenset:
        self._require(v)
        return self.adjacency[v]

    def _require(self, v):
        if v not in self.adjacency:
            raise KeyError(f"unknown vertex {v!r}")

    @property
    def edge_list(self) -> list[tuple]:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return sorted((tuple(sorted(e, key=pos.__getitem__)) for e in self.edges),
                      key=lambda e: (pos[e[0]], pos[e[1]]))

    def extend(self, vertices: Iterable = (), edges: Iterable = ()) -> "SimpleGraph":
        return SimpleGraph(self.vertices + tuple(vertices), self.edges | {frozenset(e) for e in edges})

    def to_hypergraph(self) -> hg.ConflictHypergraph:
        return hg.from_edges(self.vertices, self.edges)

    def __len__(self):
        return len(self.vertices)


class _Fresh:
    """Issues ``__aux/N`` labels above any already present."""

    def __init__(self, *graphs: SimpleGraph):
        top = -1
        for g in graphs:
            for v in g.vertices:
                m = _AUX.match(v)
                if m:
                    top = max(top, int(m.group(1)))
        self.next = top + 1

    def __call__(self) -> str:
        label = f"__aux/{self.next}"
        self.next += 1
        return label

    def many(self, k: int) -> list[str]:
        return [self() for _ in range(k)]


# ---------------------------------------------------------------- exact questions


def mis_size(g: SimpleGraph, limits=None) -> int:
    return hg.max_is_size(g.to_hypergraph(), limits)


def in_all_max_is(g: SimpleGraph, v, limits=None) -> bool:
    h = g.to_hypergraph()
    return hg.in_all_max_is(h, h.vertex_id(v), limits)


def in_some_max_is(g: SimpleGraph, v, limits=None) -> bool:
    h = g.to_hypergraph()
    return hg.in_some_max_is(h, h.vertex_id(v), limits)


def all_maximum_is(g: SimpleGraph, limits=None) -> list[frozenset]:
    h = g.to_hypergraph()
    return [h.label_set(s) for s in hg.all_maximum_is(h, limits)]


# ---------------------------------------------------------------- constructions


def complement(g: SimpleGraph) -> SimpleGraph:
    return SimpleGraph.of(g.vertices, (e for e in itertools.combinations(g.vertices, 2)
                                       if frozenset(e) not in g.edges))


def twin_extension(g: SimpleGraph, v) -> SimpleGraph:
    """Add a vertex adjacent to exactly the neighbours of ``v``.

    ``v`` lies in some maximum independent set of ``g`` iff it lies in every
    maximum independent set of the result iff the optimum grows by one.
    """
    return _twin(g, v)[0]


def _twin(g, v):
    nbrs = g.neighbours(v)
    t = _Fresh(g)()
    return g.extend([t], ((t, u) for u in sorted(nbrs))), t


def rhombus_extension(g: SimpleGraph, v) -> SimpleGraph:
    """Hang a rhombus ``v - a, v - b, a - c, b - c`` from ``v``.

    ``v`` lies in every maximum independent set of ``g`` iff it lies in some
    maximum independent set of the result.
    """
    g._require(v)
    a, b, c = _Fresh(g).many(3)
    return g.extend([a, b, c], [(v, a), (v, b), (a, c), (b, c)])


def pendant_extension(g: SimpleGraph, v) -> tuple[SimpleGraph, str]:
    """Attach a new leaf ``s`` to ``v``.

    Some maximum independent set of the result omits ``s`` iff ``v`` lies in
    every maximum independent set of ``g``.
    """
    g._require(v)
    s = _Fresh(g)()
    return g.extend([s], [(s, v)]), s


def reduce_certain_to_certain_neg(g: SimpleGraph, v) -> tuple[SimpleGraph, str]:
    """Path ``v - s - s2``: ``v`` in every maximum set of ``g`` iff ``s`` in none of the result's."""
    g._require(v)
    s, s2 = _Fresh(g).many(2)
    return g.extend([s, s2], [(s, v), (s2, s)]), s


def reduce_certain_neg_to_possible_neg(g: SimpleGraph, v) -> tuple[SimpleGraph, str]:
    """Twin of ``v``: ``v`` in no maximum set of ``g`` iff some maximum set of the result omits ``v``.

    If ``v`` is in some maximum set, the twin enlarges the optimum and every
    new maximum set must use ``v``; otherwise the optimum and its sets are
    unchanged and all of them omit ``v``.
    """
    g2, _ = _twin(g, v)
    return g2, v


def reduce_possible_neg_to_possible_pos(g: SimpleGraph, v) -> tuple[SimpleGraph, str]:
    """Gadget ``v - s1``, ``s1 - s2``, ``s1 - s3``, ``s2 - s``, ``s3 - s``.

    Some maximum set of ``g`` omits ``v`` iff ``s`` lies in some maximum set
    of the result.
    """
    g._require(v)
    s1, s2, s3, s = _Fresh(g).many(4)
    return g.extend([s1, s2, s3, s], [(s1, v), (s2, s1), (s3, s1), (s, s2), (s, s3)]), s


def reduction_chain(g: SimpleGraph, v) -> tuple[SimpleGraph, str]:
    """Compose the three reductions: certain positive on ``(g, v)`` equals possible positive on the result."""
    g1, s1 = reduce_certain_to_certain_neg(g, v)
    g2, s2 = reduce_certain_neg_to_possible_neg(g1, s1)
    return reduce_possible_neg_to_possible_pos(g2, s2)


@dataclass(frozen=True)
class BlockGraph:
    graph: SimpleGraph
    t: str
    b: str
    copy1: dict        # original label -> label in the first copy
    copy2: dict
    stable_k: tuple    # k mutually non-adjacent vertices joined to copy1 and t
    stable_k1: tuple   # k+1 mutually non-adjacent vertices joined to copy2 and b


def block_graph(g: SimpleGraph, k: int, _fresh: _Fresh | None = None) -> BlockGraph:
    """Block whose top vertex ``t`` is in every maximum set iff ``mis_size(g) == k``.

    The block has ``2n + 2k + 3`` vertices: two copies of ``g``, stables of
    sizes ``k`` and ``k + 1``, and the adjacent pair ``t``, ``b``.
    """
    if k < 1:
        raise ValueError("block_graph needs k >= 1")
    fresh = _fresh or _Fresh(g)
    c1 = {v: fresh() for v in g.vertices}
    c2 = {v: fresh() for v in g.vertices}
    ik = tuple(fresh.many(k))
    ik1 = tuple(fresh.many(k + 1))
    t, b = fresh(), fresh()
    vs = list(c1.values()) + list(c2.values()) + list(ik) + list(ik1) + [t, b]
    es = []
    for e in g.edges:
        x, y = tuple(e)
        es.append((c1[x], c1[y]))
        es.append((c2[x], c2[y]))
    es += [(c1[v], i) for v in g.vertices for i in ik]
    es += [(c2[v], i) for v in g.vertices for i in ik1]
    es += [(i, t) for i in ik] + [(i, b) for i in ik1] + [(t, b)]
    return BlockGraph(SimpleGraph.of(vs, es), t, b, c1, c2, ik, ik1)


def block_mis_size(j: int, k: int) -> int:
    """Optimum of the block for a graph with optimum ``j`` (the five-case table)."""
    if j < k - 1:
        return 2 * k + 1
    if j == k - 1:
        return 2 * k + 1
    if j == k:
        return 2 * k + 2
    if j == k + 1:
        return 2 * k + 3
    return 2 * j + 1


def modk_graph(g: SimpleGraph, k: int) -> tuple[SimpleGraph, str]:
    """Graph with a vertex ``t_g`` in every maximum set iff the largest clique of ``g`` is not a multiple of ``k``.

    Blocks over the complement of ``g`` for ``m = k, 2k, ...`` up to ``n``,
    each top vertex joined to ``t_g``.
    """
    n = len(g.vertices)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    gc = complement(g)
    fresh = _Fresh(g)
    vs, es, tops = [], set(), []
    for m in range(k, (n // k) * k + 1, k):
        blk = block_graph(gc, m, fresh)
        vs.extend(blk.graph.vertices)
        es |= blk.graph.edges
        tops.append(blk.t)
    tg = fresh()
    vs.append(tg)
    es |= {frozenset((tg, t)) for t in tops}
    return SimpleGraph(tuple(vs), frozenset(es)), tg


# ---------------------------------------------------------------- text formats


def parse_graph(text: str, source: str = "<graph>") -> SimpleGraph:
    """First non-comment line lists vertex labels; each further line is an edge ``u v``."""
    from .parser import ParseError, SourceSpan

    vertices = None
    edges = []
    offset = 0
    for line_no, raw in enumerate(text.split("\n"), start=1):
        span = SourceSpan(line_no, 1, offset, offset + len(raw.encode("utf-8")))
        offset += len(raw.encode("utf-8")) + 1
        if raw.lstrip().startswith("#"):
            continue
        parts = raw.split("#", 1)[0].split()
        if vertices is None:
            vertices = parts
            if len(set(parts)) != len(parts):
                raise ParseError("duplicate vertex label", span, source)
            continue
        if not parts:
            continue
        if len(parts) != 2:
            raise ParseError(f"an edge line needs two labels, got {len(parts)}", span, source)
        u, v = parts
        for x in parts:
            if x not in vertices:
                raise ParseError(f"unknown vertex {x!r}", span, source)
        if u == v:
            raise ParseError("self-loops are not allowed", span, source)
        edges.append((u, v))
    return SimpleGraph.of(vertices or [], edges)


def format_graph(g: SimpleGraph) -> str:
    lines = [" ".join(g.vertices)]
    lines += [f"{a} {b}" for a, b in g.edge_list]
    return "\n".join(lines) + "\n"


def to_dot(g: SimpleGraph, name: str = "g") -> str:
    def q(s):
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"graph {q(name)} {{"]
    lines += [f"  {q(v)};" for v in g.vertices]
    lines += [f"  {q(a)} -- {q(b)};" for a, b in g.edge_list]
    lines.append("}")
    return "\n".join(lines) + "\n"
