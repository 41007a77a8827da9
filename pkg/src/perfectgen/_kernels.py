"""Hot loops: Dinic max-flow and the edge-colouring fan iteration.

Both are written as plain functions over numpy arrays and wrapped with numba
when it is importable; the undecorated twins stay exported so the pure-Python
path can be exercised directly (equivalence is tested).  This module must
remain a real file on disk for numba's on-disk cache to work.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "HAVE_NUMBA",
    "dinic_maxflow",
    "mg_core",
    "dinic_maxflow_py",
    "mg_core_py",
]

_BIG = 1 << 60


def _dinic_impl(indptr, arc_index, arc_to, cap, s, t, limit):
    """Max flow from s to t, stopping early once `limit` is reached.

    indptr/arc_index: CSR adjacency, node -> positions -> arc ids.
    arc_to[a]: head of arc a; arc a ^ 1 is its reverse.  cap is mutated.
    """
    n_nodes = indptr.shape[0] - 1
    level = np.empty(n_nodes, np.int32)
    queue = np.empty(n_nodes, np.int32)
    it = np.empty(n_nodes, np.int64)
    stack_node = np.empty(n_nodes + 1, np.int32)
    stack_arc = np.empty(n_nodes + 1, np.int64)
    flow = 0
    while flow < limit:
        for i in range(n_nodes):
            level[i] = -1
        head = 0
        tail = 0
        queue[tail] = s
        tail += 1
        level[s] = 0
        while head < tail and level[t] < 0:
            u = queue[head]
            head += 1
            for p in range(indptr[u], indptr[u + 1]):
                a = arc_index[p]
                v = arc_to[a]
                if cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue[tail] = v
                    tail += 1
        if level[t] < 0:
            break
        for i in range(n_nodes):
            it[i] = indptr[i]
        while flow < limit:
            depth = 0
            stack_node[0] = s
            found = False
            while True:
                u = stack_node[depth]
                if u == t:
                    found = True
                    break
                advanced = False
                while it[u] < indptr[u + 1]:
                    a = arc_index[it[u]]
                    v = arc_to[a]
                    if cap[a] > 0 and level[v] == level[u] + 1:
                        stack_arc[depth] = a
                        depth += 1
                        stack_node[depth] = v
                        advanced = True
                        break
                    it[u] += 1
                if advanced:
                    continue
                level[u] = -1
                if depth == 0:
                    break
                depth -= 1
                it[stack_node[depth]] += 1
            if not found:
                break
            aug = _BIG
            for d in range(depth):
                a = stack_arc[d]
                if cap[a] < aug:
                    aug = cap[a]
            if flow + aug > limit:
                aug = limit - flow
            for d in range(depth):
                a = stack_arc[d]
                cap[a] -= aug
                cap[a ^ 1] += aug
            flow += aug
    return flow


def _mg_impl(n, pal, eu, ev, cmat, pcol):
    """Colour the edges (eu[i], ev[i]) on top of the partial state in
    cmat/pcol with palette {0..pal-1} by maximal-fan rotation and cd-path
    inversion.  cmat[u*n+v] is the colour of edge uv (-1 free); pcol[v*pal+c]
    is v's partner along colour c (-1 free).  Returns 0, or a negative code
    if the iteration ever lacks a free colour (cannot happen when every
    touched vertex keeps degree < pal, the Vizing condition).
    """
    fan = np.empty(pal + 1, np.int32)
    tmpc = np.empty(pal + 1, np.int32)
    mark = np.zeros(n, np.uint8)
    path = np.empty(2 * n + 2, np.int32)
    for idx in range(eu.shape[0]):
        x = eu[idx]
        f0 = ev[idx]
        done = False
        for c in range(pal):
            if pcol[x * pal + c] < 0 and pcol[f0 * pal + c] < 0:
                pcol[x * pal + c] = f0
                pcol[f0 * pal + c] = x
                cmat[x * n + f0] = c
                cmat[f0 * n + x] = c
                done = True
                break
        if done:
            continue
        fan[0] = f0
        mark[f0] = 1
        fl = 1
        while True:
            last = fan[fl - 1]
            nxt = -1
            for c in range(pal):
                if pcol[last * pal + c] < 0:
                    w = pcol[x * pal + c]
                    if w >= 0 and mark[w] == 0:
                        nxt = w
                        break
            if nxt < 0:
                break
            fan[fl] = nxt
            mark[nxt] = 1
            fl += 1
        for i in range(fl):
            mark[fan[i]] = 0
        c = -1
        for cc in range(pal):
            if pcol[x * pal + cc] < 0:
                c = cc
                break
        last = fan[fl - 1]
        d = -1
        for cc in range(pal):
            if pcol[last * pal + cc] < 0:
                d = cc
                break
        if c < 0 or d < 0:
            return -1
        if pcol[x * pal + d] < 0:
            j = fl - 1
        else:
            # invert the d/c alternating path starting at x
            plen = 0
            path[0] = x
            v = x
            col = d
            while True:
                w = pcol[v * pal + col]
                if w < 0:
                    break
                plen += 1
                path[plen] = w
                v = w
                col = c if col == d else d
            for i in range(plen):
                oc = d if i % 2 == 0 else c
                a = path[i]
                b = path[i + 1]
                pcol[a * pal + oc] = -1
                pcol[b * pal + oc] = -1
            for i in range(plen):
                nc = c if i % 2 == 0 else d
                a = path[i]
                b = path[i + 1]
                pcol[a * pal + nc] = b
                pcol[b * pal + nc] = a
                cmat[a * n + b] = nc
                cmat[b * n + a] = nc
            # the fan prefix that survived the inversion, ending where d is free
            j = -1
            for i in range(fl):
                if i > 0:
                    ci = cmat[x * n + fan[i]]
                    if ci < 0 or pcol[fan[i - 1] * pal + ci] >= 0:
                        break
                if pcol[fan[i] * pal + d] < 0:
                    j = i
                    break
            if j < 0:
                return -2
        for t2 in range(j):
            tmpc[t2] = cmat[x * n + fan[t2 + 1]]
        for t2 in range(1, j + 1):
            oc = cmat[x * n + fan[t2]]
            pcol[x * pal + oc] = -1
            pcol[fan[t2] * pal + oc] = -1
            cmat[x * n + fan[t2]] = -1
            cmat[fan[t2] * n + x] = -1
        for t2 in range(j):
            nc = tmpc[t2]
            w = fan[t2]
            pcol[x * pal + nc] = w
            pcol[w * pal + nc] = x
            cmat[x * n + w] = nc
            cmat[w * n + x] = nc
        w = fan[j]
        pcol[x * pal + d] = w
        pcol[w * pal + d] = x
        cmat[x * n + w] = d
        cmat[w * n + x] = d
    return 0


dinic_maxflow_py = _dinic_impl
mg_core_py = _mg_impl

try:
    from numba import njit

    dinic_maxflow = njit(cache=True)(_dinic_impl)
    mg_core = njit(cache=True)(_mg_impl)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    dinic_maxflow = _dinic_impl
    mg_core = _mg_impl
    HAVE_NUMBA = False
