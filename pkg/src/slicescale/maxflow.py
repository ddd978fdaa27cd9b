"""Edmonds-Karp maximum flow and a strict-support transportation check for matrices."""
from __future__ import annotations

from collections import deque

import numpy as np

from .exceptions import DimensionError
from .tensor import TargetSums


class FlowNetwork:
    """Residual-graph max-flow on real capacities (BFS augmenting paths)."""

    def __init__(self, num_nodes):
        self.n = num_nodes
        self.adj = [[] for _ in range(num_nodes)]
        self.to = []
        self.cap = []

    def add_edge(self, u, v, capacity):
        """Add ``u -> v``; returns the edge id (its reverse is ``id ^ 1``)."""
        eid = len(self.to)
        self.to += [v, u]
        self.cap += [float(capacity), 0.0]
        self.adj[u].append(eid)
        self.adj[v].append(eid + 1)
        return eid

    def flow_on(self, eid):
        return self.cap[eid ^ 1]

    def max_flow(self, s, t, eps=0.0):
        total = 0.0
        while True:
            parent = [-1] * self.n
            parent[s] = -2
            q = deque([s])
            while q and parent[t] == -1:
                u = q.popleft()
                for e in self.adj[u]:
                    v = self.to[e]
                    if parent[v] == -1 and self.cap[e] > eps:
                        parent[v] = e
                        q.append(v)
            if parent[t] == -1:
                return total
            push = np.inf
            v = t
            while v != s:
                e = parent[v]
                push = min(push, self.cap[e])
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = parent[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.to[e ^ 1]
            total += push


def pattern_feasible_maxflow(pattern, s: TargetSums, strict_rtol=1e-9) -> bool:
    """Is there a matrix supported exactly on ``pattern`` with row sums ``s[0]``
    and column sums ``s[1]``?

    Each pattern cell must carry at least ``strict_rtol * total``, enforced by
    the usual lower-bound-to-demand transformation of the circulation::

        source -> row i      exactly s[0][i]
        row i  -> column j   at least eps, unbounded above, for (i, j) in pattern
        column j -> sink     exactly s[1][j]
        sink   -> source     unbounded

    Parameters
    ----------
    pattern : iterable of (int, int)
        0-based support cells.
    s : TargetSums
        Two positive target vectors with equal totals.
    strict_rtol : float
        Lower bound on every pattern cell, relative to the common total.
        ``0`` gives the plain (non-strict) transportation check.
    """
    if s.ndim != 2:
        raise DimensionError("the max-flow oracle only handles matrices (two modes)")
    rows, cols = s.vectors
    m1, m2 = rows.size, cols.size
    cells = sorted({(int(i), int(j)) for i, j in pattern})
    if any(not (0 <= i < m1 and 0 <= j < m2) for i, j in cells):
        raise DimensionError("pattern cell out of range")
    total = float(np.sum(rows))
    if abs(total - float(np.sum(cols))) > 1e-9 * total:
        return False
    eps = strict_rtol * total

    src, snk = m1 + m2, m1 + m2 + 1
    ssrc, ssnk = m1 + m2 + 2, m1 + m2 + 3
    net = FlowNetwork(m1 + m2 + 4)
    excess = np.zeros(m1 + m2 + 2)

    def bounded(u, v, lo, hi):
        net.add_edge(u, v, hi - lo)
        excess[v] += lo
        excess[u] -= lo

    for i in range(m1):
        bounded(src, i, rows[i], rows[i])
    for j in range(m2):
        bounded(m1 + j, snk, cols[j], cols[j])
    for i, j in cells:
        bounded(i, m1 + j, eps, np.inf)
    net.add_edge(snk, src, np.inf)

    demand = 0.0
    for v, ex in enumerate(excess):
        if ex > 0:
            net.add_edge(ssrc, v, ex)
            demand += ex
        elif ex < 0:
            net.add_edge(v, ssnk, -ex)
    flow = net.max_flow(ssrc, ssnk, eps=1e-15 * total)
    return bool(flow >= demand - 1e-3 * max(eps, 1e-12 * total))
