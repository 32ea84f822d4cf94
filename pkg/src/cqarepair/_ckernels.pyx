# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hitting-set branch and bound over flat C arrays.

Same search order and results as the pure-Python backend; only the state
bookkeeping is moved to typed arrays.
"""

from libc.stdlib cimport malloc, calloc, free
import time

from .errors import SolverLimitError

cdef enum:
    CHECK_EVERY = 256
    UNDECIDED = 0
    IN = 1
    OUT = 2


cdef class _CState:
    cdef int n, m
    cdef int *e_ptr
    cdef int *e_vtx
    cdef int *v_ptr
    cdef int *v_edge
    cdef long long *w
    cdef char *status
    cdef int *hit
    cdef int *outc
    cdef int *size
    cdef int *order
    cdef int *trail
    cdef int trail_len
    cdef long long cost
    cdef long long *residual
    cdef int *rstamp
    cdef int *deg
    cdef int *touched
    cdef int stamp
    cdef int *queue
    cdef int qcap

    def __cinit__(self, int n, list edges, weights):
        cdef int i, j, v, total = 0
        cdef int *fill
        cdef list norm = [sorted(set(e)) for e in edges]
        self.n = n
        self.m = len(norm)
        for e in norm:
            total += len(e)
        self.e_ptr = <int *> malloc((self.m + 1) * sizeof(int))
        self.e_vtx = <int *> malloc((total + 1) * sizeof(int))
        self.v_ptr = <int *> calloc(n + 2, sizeof(int))
        self.v_edge = <int *> malloc((total + 1) * sizeof(int))
        self.w = <long long *> malloc((n + 1) * sizeof(long long))
        self.status = <char *> calloc(n + 1, sizeof(char))
        self.hit = <int *> calloc(self.m + 1, sizeof(int))
        self.outc = <int *> calloc(self.m + 1, sizeof(int))
        self.size = <int *> malloc((self.m + 1) * sizeof(int))
        self.order = <int *> malloc((self.m + 1) * sizeof(int))
        self.trail = <int *> malloc((n + 1) * sizeof(int))
        self.residual = <long long *> malloc((n + 1) * sizeof(long long))
        self.rstamp = <int *> calloc(n + 1, sizeof(int))
        self.deg = <int *> calloc(n + 1, sizeof(int))
        self.touched = <int *> malloc((n + 1) * sizeof(int))
        self.qcap = self.m + n + 1
        self.queue = <int *> malloc(self.qcap * sizeof(int))
        if (not self.e_ptr or not self.e_vtx or not self.v_ptr or not self.v_edge or not self.w
                or not self.status or not self.hit or not self.outc or not self.size or not self.order
                or not self.trail or not self.residual or not self.rstamp or not self.deg
                or not self.touched or not self.queue):
            raise MemoryError()
        j = 0
        for i in range(self.m):
            self.e_ptr[i] = j
            self.size[i] = len(norm[i])
            for v in norm[i]:
                self.e_vtx[j] = v
                self.v_ptr[v + 1] += 1
                j += 1
        self.e_ptr[self.m] = j
        for v in range(n):
            self.v_ptr[v + 1] += self.v_ptr[v]
        fill = <int *> calloc(n + 1, sizeof(int))
        for i in range(self.m):
            for j in range(self.e_ptr[i], self.e_ptr[i + 1]):
                v = self.e_vtx[j]
                self.v_edge[self.v_ptr[v] + fill[v]] = i
                fill[v] += 1
        free(fill)
        for v in range(n):
            self.w[v] = weights[v]
        for i, e in enumerate(sorted(range(self.m), key=lambda x: (len(norm[x]), x))):
            self.order[i] = e
        self.trail_len = 0
        self.cost = 0
        self.stamp = 0

    def __dealloc__(self):
        free(self.e_ptr); free(self.e_vtx); free(self.v_ptr); free(self.v_edge); free(self.w)
        free(self.status); free(self.hit); free(self.outc); free(self.size); free(self.order)
        free(self.trail); free(self.residual); free(self.rstamp); free(self.deg)
        free(self.touched); free(self.queue)

    cdef bint assign(self, int v0, int s0):
        cdef int qh = 0, qt = 0, v, s, e, j, u, k, free_
        # queue holds encoded (vertex, status) as vertex*4 + status
        self.queue[qt] = v0 * 4 + s0
        qt += 1
        while qh < qt:
            v = self.queue[qh] >> 2
            s = self.queue[qh] & 3
            qh += 1
            if self.status[v] == s:
                continue
            if self.status[v] != UNDECIDED:
                return False
            self.status[v] = s
            self.trail[self.trail_len] = v
            self.trail_len += 1
            if s == IN:
                self.cost += self.w[v]
                for k in range(self.v_ptr[v], self.v_ptr[v + 1]):
                    self.hit[self.v_edge[k]] += 1
            else:
                for k in range(self.v_ptr[v], self.v_ptr[v + 1]):
                    e = self.v_edge[k]
                    self.outc[e] += 1
                    if self.hit[e] == 0:
                        free_ = self.size[e] - self.outc[e]
                        if free_ == 0:
                            return False
                        if free_ == 1:
                            for j in range(self.e_ptr[e], self.e_ptr[e + 1]):
                                u = self.e_vtx[j]
                                if self.status[u] == UNDECIDED:
                                    # each edge turns unit at most once per call, so m + 1 slots suffice
                                    self.queue[qt] = u * 4 + IN
                                    qt += 1
                                    break
        return True

    cdef void undo(self, int mark):
        cdef int v, k
        while self.trail_len > mark:
            self.trail_len -= 1
            v = self.trail[self.trail_len]
            if self.status[v] == IN:
                self.cost -= self.w[v]
                for k in range(self.v_ptr[v], self.v_ptr[v + 1]):
                    self.hit[self.v_edge[k]] -= 1
            else:
                for k in range(self.v_ptr[v], self.v_ptr[v + 1]):
                    self.outc[self.v_edge[k]] -= 1
            self.status[v] = UNDECIDED

    cdef long long evaluate(self, bint lex, int *branch):
        cdef int oi, e, j, u, ntouch = 0, best = -1, bestdeg = -1
        cdef long long lb = 0, c, r
        self.stamp += 1
        for oi in range(self.m):
            e = self.order[oi]
            if self.hit[e]:
                continue
            c = -1
            for j in range(self.e_ptr[e], self.e_ptr[e + 1]):
                u = self.e_vtx[j]
                if self.status[u] == UNDECIDED:
                    if self.rstamp[u] != self.stamp:
                        self.rstamp[u] = self.stamp
                        self.residual[u] = self.w[u]
                        self.deg[u] = 0
                        self.touched[ntouch] = u
                        ntouch += 1
                    r = self.residual[u]
                    if c < 0 or r < c:
                        c = r
                    self.deg[u] += 1
            lb += c
            if c > 0:
                for j in range(self.e_ptr[e], self.e_ptr[e + 1]):
                    u = self.e_vtx[j]
                    if self.status[u] == UNDECIDED:
                        self.residual[u] -= c
        for j in range(ntouch):
            u = self.touched[j]
            if lex:
                if best < 0 or u < best:
                    best = u
            elif self.deg[u] > bestdeg or (self.deg[u] == bestdeg and u < best):
                best = u
                bestdeg = self.deg[u]
        branch[0] = best
        return lb

    cdef list chosen(self):
        cdef int i, v
        out = []
        for i in range(self.trail_len):
            v = self.trail[i]
            if self.status[v] == IN:
                out.append(v)
        out.sort()
        return out

    cdef bint has_open_edge(self):
        cdef int e
        for e in range(self.m):
            if self.hit[e] == 0:
                return True
        return False


cdef class _Clock:
    cdef object deadline
    cdef long nodes

    def __cinit__(self, deadline):
        self.deadline = deadline
        self.nodes = 0

    cdef inline void tick(self) except *:
        self.nodes += 1
        if self.deadline is not None and self.nodes % CHECK_EVERY == 0 and time.monotonic() > self.deadline:
            raise SolverLimitError("time", None, "exact solver ran past its deadline")


cdef tuple _greedy(_CState st):
    cdef int e, j, u, best
    cdef double key, best_key
    cdef int *deg = <int *> calloc(st.n + 1, sizeof(int))
    try:
        while True:
            for u in range(st.n):
                deg[u] = 0
            best = -1
            for e in range(st.m):
                if st.hit[e] == 0:
                    for j in range(st.e_ptr[e], st.e_ptr[e + 1]):
                        u = st.e_vtx[j]
                        if st.status[u] == UNDECIDED:
                            deg[u] += 1
            for u in range(st.n):
                if deg[u] > 0:
                    key = -(<double> deg[u]) / st.w[u]
                    if best < 0 or key < best_key:
                        best = u
                        best_key = key
            if best < 0:
                break
            st.assign(best, IN)
        sol = st.chosen()
        cost = st.cost
        st.undo(0)
        return cost, sol
    finally:
        free(deg)


cdef tuple _dfs(_CState st, int mode, long long bound, _Clock clock, object limit):
    # mode 0: optimise, 1: all optima of cost ``bound``, 2: lexicographically least optimum
    cdef long long best = bound, lb, total
    cdef int cap = 2 * st.n + 4, sp = 0, v, s, mark, b
    cdef int *sv = <int *> malloc(cap * sizeof(int))
    cdef int *ss = <int *> malloc(cap * sizeof(int))
    cdef int *sm = <int *> malloc(cap * sizeof(int))
    cdef bint lex = mode == 2
    best_sol = None
    found = []
    try:
        sv[0] = -1; ss[0] = 0; sm[0] = 0
        sp = 1
        while sp > 0:
            sp -= 1
            v = sv[sp]; s = ss[sp]; mark = sm[sp]
            st.undo(mark)
            if v >= 0 and not st.assign(v, s):
                continue
            clock.tick()
            lb = st.evaluate(lex, &b)
            total = st.cost + lb
            if mode == 0:
                if total >= best:
                    continue
            elif total > bound:
                continue
            if b < 0:
                if mode == 0:
                    best = st.cost
                    best_sol = st.chosen()
                    continue
                if st.cost == bound:
                    found.append(st.chosen())
                    if lex:
                        break
                    if limit is not None and len(found) > limit:
                        st.undo(0)
                        raise SolverLimitError("repairs", limit, "too many optimal solutions")
                continue
            mark = st.trail_len
            sv[sp] = b; ss[sp] = OUT; sm[sp] = mark
            sv[sp + 1] = b; ss[sp + 1] = IN; sm[sp + 1] = mark
            sp += 2
        st.undo(0)
        return best, best_sol, found
    finally:
        free(sv); free(ss); free(sm)


def _weights(n, weights):
    return [1] * n if weights is None else list(weights)


def min_hitting_set(n, edges, weights=None, deadline=None):
    cdef _CState st = _CState(n, list(edges), _weights(n, weights))
    cdef int e
    for e in range(st.m):
        if st.size[e] == 0:
            raise ValueError("empty edge cannot be hit")
    cost, sol = _greedy(st)
    best, best_sol, _ = _dfs(st, 0, cost, _Clock(deadline), None)
    if best_sol is None:
        return cost, sol
    return best, best_sol


def all_min_hitting_sets(n, edges, weights, opt, deadline=None, limit=None):
    cdef _CState st = _CState(n, list(edges), _weights(n, weights))
    _, _, found = _dfs(st, 1, opt, _Clock(deadline), limit)
    return sorted(found)


def lex_least_min_hitting_set(n, edges, weights, opt, deadline=None):
    cdef _CState st = _CState(n, list(edges), _weights(n, weights))
    _, _, found = _dfs(st, 2, opt, _Clock(deadline), None)
    return found[0] if found else None


cdef bint _all_private(_CState st):
    cdef int i, v, k
    cdef bint ok
    for i in range(st.trail_len):
        v = st.trail[i]
        if st.status[v] != IN:
            continue
        ok = False
        for k in range(st.v_ptr[v], st.v_ptr[v + 1]):
            if st.hit[st.v_edge[k]] == 1:
                ok = True
                break
        if not ok:
            return False
    return True


def minimal_hitting_sets(n, edges, deadline=None, limit=None):
    cdef _CState st = _CState(n, list(edges), [1] * n)
    cdef _Clock clock = _Clock(deadline)
    cdef int cap = 2 * n + 4, sp, v, s, mark, b, oi, e, j
    cdef int *sv = <int *> malloc(cap * sizeof(int))
    cdef int *ss = <int *> malloc(cap * sizeof(int))
    cdef int *sm = <int *> malloc(cap * sizeof(int))
    found = []
    try:
        sv[0] = -1; ss[0] = 0; sm[0] = 0
        sp = 1
        while sp > 0:
            sp -= 1
            v = sv[sp]; s = ss[sp]; mark = sm[sp]
            st.undo(mark)
            if v >= 0 and not st.assign(v, s):
                continue
            clock.tick()
            if not _all_private(st):
                continue
            b = -1
            for oi in range(st.m):
                e = st.order[oi]
                if st.hit[e] == 0:
                    for j in range(st.e_ptr[e], st.e_ptr[e + 1]):
                        if st.status[st.e_vtx[j]] == UNDECIDED:
                            b = st.e_vtx[j]
                            break
                    break
            if b < 0:
                found.append(st.chosen())
                if limit is not None and len(found) > limit:
                    raise SolverLimitError("repairs", limit, "too many minimal solutions")
                continue
            mark = st.trail_len
            sv[sp] = b; ss[sp] = OUT; sm[sp] = mark
            sv[sp + 1] = b; ss[sp + 1] = IN; sm[sp + 1] = mark
            sp += 2
        return sorted(found)
    finally:
        free(sv); free(ss); free(sm)
