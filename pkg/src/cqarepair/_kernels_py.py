"""Pure-Python hitting-set kernels.

Vertices are ``0..n-1`` and edges are sequences of vertex ids. A hitting set
meets every edge; its complement is an independent set. All searches are
depth-first with an explicit stack so deep instances do not hit the recursion
limit.
"""

from __future__ import annotations

import time
from collections import Counter

from .errors import SolverLimitError

_CHECK_EVERY = 256
UNDECIDED, IN, OUT = 0, 1, 2


class _State:
    """Incremental search state: per-vertex status and per-edge hit/out counters."""

    def __init__(self, n, edges, weights):
        self.n = n
        self.edges = [tuple(sorted(set(e))) for e in edges]
        m = len(self.edges)
        self.inc = [[] for _ in range(n)]
        for i, e in enumerate(self.edges):
            for v in e:
                self.inc[v].append(i)
        self.w = list(weights)
        self.status = [UNDECIDED] * n
        self.hit = [0] * m
        self.out = [0] * m
        self.size = [len(e) for e in self.edges]
        self.trail = []
        self.cost = 0
        self.order = sorted(range(m), key=lambda i: (self.size[i], i))

    def assign(self, v, s):
        """Set ``v`` to IN or OUT and unit-propagate. Returns False on a dead edge."""
        status, hit, out, size, edges = self.status, self.hit, self.out, self.size, self.edges
        queue = [(v, s)]
        while queue:
            v, s = queue.pop()
            cur = status[v]
            if cur == s:
                continue
            if cur != UNDECIDED:
                return False
            status[v] = s
            self.trail.append(v)
            if s == IN:
                self.cost += self.w[v]
                for e in self.inc[v]:
                    hit[e] += 1
            else:
                for e in self.inc[v]:
                    out[e] += 1
                    if hit[e] == 0:
                        free = size[e] - out[e]
                        if free == 0:
                            return False
                        if free == 1:
                            for u in edges[e]:
                                if status[u] == UNDECIDED:
                                    queue.append((u, IN))
                                    break
        return True

    def undo(self, mark):
        status, hit, out, trail = self.status, self.hit, self.out, self.trail
        while len(trail) > mark:
            v = trail.pop()
            if status[v] == IN:
                self.cost -= self.w[v]
                for e in self.inc[v]:
                    hit[e] -= 1
            else:
                for e in self.inc[v]:
                    out[e] -= 1
            status[v] = UNDECIDED

    def evaluate(self, lex):
        """Dual-greedy lower bound on the remaining cost and the branching vertex.

        The branching vertex is the undecided vertex of largest open degree
        (ties to the smaller id), or the smallest undecided id when ``lex``.
        Returns ``(bound, -1)`` when every edge is hit.
        """
        status, hit, edges, w = self.status, self.hit, self.edges, self.w
        residual = {}
        deg = {}
        lb = 0
        for e in self.order:
            if hit[e]:
                continue
            c = None
            for u in edges[e]:
                if status[u] == UNDECIDED:
                    r = residual.get(u)
                    if r is None:
                        r = w[u]
                    if c is None or r < c:
                        c = r
                    deg[u] = deg.get(u, 0) + 1
            lb += c
            if c:
                for u in edges[e]:
                    if status[u] == UNDECIDED:
                        residual[u] = residual.get(u, w[u]) - c
        if not deg:
            return lb, -1
        if lex:
            return lb, min(deg)
        return lb, min(deg, key=lambda u: (-deg[u], u))

    def chosen(self):
        return sorted(v for v in self.trail if self.status[v] == IN)


class _Clock:
    def __init__(self, deadline):
        self.deadline = deadline
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes % _CHECK_EVERY == 0 and time.monotonic() > self.deadline:
            raise SolverLimitError("time", None, "exact solver ran past its deadline")


def _greedy(st):
    """Repeatedly take the vertex with the best open-degree per weight."""
    while True:
        best, best_key = -1, None
        deg = Counter()
        for e in range(len(st.edges)):
            if st.hit[e] == 0:
                for u in st.edges[e]:
                    if st.status[u] == UNDECIDED:
                        deg[u] += 1
        if not deg:
            break
        for u, d in deg.items():
            key = (-d / st.w[u], u)
            if best_key is None or key < best_key:
                best, best_key = u, key
        st.assign(best, IN)
    sol, cost = st.chosen(), st.cost
    st.undo(0)
    return cost, sol


def _dfs(st, mode, bound, clock, limit):
    """Shared branch-and-bound driver.

    ``opt``: minimise; ``bound`` is an incumbent cost to beat.
    ``all``: collect every hitting set of cost exactly ``bound``.
    ``lex``: first hitting set of cost ``bound`` in include-first id order,
    which is the lexicographically least one.
    """
    best, best_sol = bound, None
    found = []
    lex = mode == "lex"
    stack = [(-1, 0, 0)]
    while stack:
        v, s, mark = stack.pop()
        st.undo(mark)
        if v >= 0 and not st.assign(v, s):
            continue
        clock.tick()
        lb, b = st.evaluate(lex)
        total = st.cost + lb
        if (total >= best) if mode == "opt" else (total > bound):
            continue
        if b < 0:
            if mode == "opt":
                best, best_sol = st.cost, st.chosen()
                continue
            if st.cost == bound:
                found.append(st.chosen())
                if lex:
                    break
                if limit is not None and len(found) > limit:
                    st.undo(0)
                    raise SolverLimitError("repairs", limit, "too many optimal solutions")
            continue
        mark = len(st.trail)
        stack.append((b, OUT, mark))
        stack.append((b, IN, mark))
    st.undo(0)
    return best, best_sol, found


def min_hitting_set(n, edges, weights=None, deadline=None):
    """Minimum-weight hitting set: ``(cost, sorted vertex list)``."""
    st = _State(n, edges, weights if weights is not None else [1] * n)
    if any(sz == 0 for sz in st.size):
        raise ValueError("empty edge cannot be hit")
    cost, sol = _greedy(st)
    best, best_sol, _ = _dfs(st, "opt", cost, _Clock(deadline), None)
    if best_sol is None:
        return cost, sol
    return best, best_sol


def all_min_hitting_sets(n, edges, weights, opt, deadline=None, limit=None):
    """Every hitting set of total weight ``opt`` (which must be the optimum)."""
    st = _State(n, edges, weights if weights is not None else [1] * n)
    _, _, found = _dfs(st, "all", opt, _Clock(deadline), limit)
    return sorted(found)


def lex_least_min_hitting_set(n, edges, weights, opt, deadline=None):
    st = _State(n, edges, weights if weights is not None else [1] * n)
    _, _, found = _dfs(st, "lex", opt, _Clock(deadline), None)
    return found[0] if found else None


def minimal_hitting_sets(n, edges, deadline=None, limit=None):
    """All inclusion-minimal hitting sets (complements of maximal independent sets)."""
    st = _State(n, edges, [1] * n)
    clock = _Clock(deadline)
    found = []
    stack = [(-1, 0, 0)]
    inc, hit = st.inc, st.hit
    while stack:
        v, s, mark = stack.pop()
        st.undo(mark)
        if v >= 0 and not st.assign(v, s):
            continue
        clock.tick()
        # every chosen vertex needs a private edge, and choices only grow
        if any(st.status[u] == IN and not any(hit[e] == 1 for e in inc[u]) for u in st.trail):
            continue
        b = -1
        for e in st.order:
            if hit[e] == 0:
                b = next(u for u in st.edges[e] if st.status[u] == UNDECIDED)
                break
        if b < 0:
            found.append(st.chosen())
            if limit is not None and len(found) > limit:
                raise SolverLimitError("repairs", limit, "too many minimal solutions")
            continue
        mark = len(st.trail)
        stack.append((b, OUT, mark))
        stack.append((b, IN, mark))
    return sorted(found)


# ---------------------------------------------------------------- bounded search


def hitting_set_bounded(edges, k, deadline=None):
    """A hitting set of size at most ``k`` or None (bounded search tree).

    When every edge has two vertices the vertex-cover rules apply: a vertex
    of degree above ``k`` is forced, more than ``k*k`` remaining edges is a
    no-instance, a degree-one vertex is replaced by its neighbour, and the
    branch is on a maximum-degree vertex versus its whole neighbourhood.
    """
    es = list(dict.fromkeys(tuple(sorted(set(e))) for e in edges))
    if any(not e for e in es):
        return None
    if k < 0:
        return None
    r = _bounded(es, k, frozenset(), _Clock(deadline))
    return sorted(r) if r is not None else None


def _take(edges, k, chosen, vs, clock):
    vs = set(vs)
    if len(vs) > k:
        return None
    rest = [e for e in edges if vs.isdisjoint(e)]
    return _bounded(rest, k - len(vs), chosen | vs, clock)


def _bounded(edges, k, chosen, clock):
    clock.tick()
    if not edges:
        return chosen
    forced = {e[0] for e in edges if len(e) == 1}
    if forced:
        return _take(edges, k, chosen, forced, clock)
    if k == 0:
        return None
    if all(len(e) == 2 for e in edges):
        edges = list(dict.fromkeys(edges))
        deg = Counter(v for e in edges for v in e)
        high = [v for v, d in deg.items() if d > k]
        if high:
            return _take(edges, k, chosen, high, clock)
        if len(edges) > k * k:
            return None
        for a, b in edges:
            if deg[a] == 1:
                return _take(edges, k, chosen, (b,), clock)
            if deg[b] == 1:
                return _take(edges, k, chosen, (a,), clock)
        v = min(deg, key=lambda u: (-deg[u], u))
        r = _take(edges, k, chosen, (v,), clock)
        if r is not None:
            return r
        nbrs = {u for e in edges if v in e for u in e if u != v}
        return _take(edges, k, chosen, nbrs, clock)
    e = min(edges, key=lambda f: (len(f), f))
    for i, u in enumerate(e):
        # take u; earlier vertices of e are excluded in this branch
        excluded = set(e[:i])
        rest = []
        for f in edges:
            if u in f:
                continue
            g = tuple(x for x in f if x not in excluded) if excluded else f
            if not g:
                break
            rest.append(g)
        else:
            r = _bounded(rest, k - 1, chosen | {u}, clock)
            if r is not None:
                return r
    return None
