"""Exact combinatorial algorithms and small-instance oracles.

Everything here is structure-agnostic: branch-and-bound clique/stability
numbers, maximal-clique enumeration, induced-subgraph search, unipolar
classification by exhaustive central-set search, exact vertex connectivity
via unit-capacity max flow, Hopcroft-Karp matching, and edge colouring
(Misra-Gries fan iteration, with certified class-one paths for bipartite
graphs and for graphs with a unique maximum-degree vertex).

Oracle scale limits are explicit constants raising ScaleError; nothing
truncates silently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CliqueCapError, ScaleError, ValidationError
from .graphcore import (
    Graph,
    bit_list,
    complement,
    component_of,
    degrees,
    iter_bits,
)

__all__ = [
    "ORACLE_MAX_N",
    "GS_MAX_N",
    "INDUCED_MAX_PATTERN",
    "GraphInvariants",
    "GSTag",
    "GSClass",
    "MatchingResult",
    "EdgeColouring",
    "alpha_exact",
    "omega_exact",
    "maximal_cliques",
    "contains_induced",
    "classify_gs",
    "connectivity",
    "max_bipartite_matching",
    "vizing_colour",
    "chromatic_index",
    "bipartition",
]

ORACLE_MAX_N = 64
GS_MAX_N = 16
INDUCED_MAX_PATTERN = 10

# Set by the test suite: verify every edge colouring before returning it.
CHECK_COLOURINGS = False


@dataclass(frozen=True)
class GraphInvariants:
    alpha: int
    omega: int
    h: int
    big_h: int
    kappa: int
    delta: int
    cap_delta: int
    chi_prime: int


class GSTag(enum.Enum):
    NOT_GS = "NotGS"
    UNIPOLAR_ONLY = "UnipolarOnly"
    CO_UNIPOLAR_ONLY = "CoUnipolarOnly"
    BOTH = "Both"


@dataclass(frozen=True)
class GSClass:
    tag: GSTag
    witness_central: int | None


# -- clique / stability oracles ---------------------------------------------------


def omega_exact(g: Graph) -> int:
    """Exact clique number by branch and bound with greedy-colouring bounds."""
    if g.n > ORACLE_MAX_N:
        raise ScaleError(f"omega_exact handles n <= {ORACLE_MAX_N}, got {g.n}")
    rows = g.rows
    best = 0

    def expand(r_size: int, p_mask: int) -> None:
        nonlocal best
        if p_mask == 0:
            if r_size > best:
                best = r_size
            return
        order: list[tuple[int, int]] = []
        q = p_mask
        colour = 0
        while q:
            colour += 1
            avail = q
            while avail:
                v = (avail & -avail).bit_length() - 1
                order.append((v, colour))
                q &= ~(1 << v)
                avail &= ~(rows[v] | (1 << v))
        p = p_mask
        for v, c in reversed(order):
            if r_size + c <= best:
                return
            expand(r_size + 1, p & rows[v])
            p &= ~(1 << v)

    expand(0, g.vertex_mask())
    return best


def alpha_exact(g: Graph) -> int:
    """Exact stability number (clique number of the complement)."""
    if g.n > ORACLE_MAX_N:
        raise ScaleError(f"alpha_exact handles n <= {ORACLE_MAX_N}, got {g.n}")
    return omega_exact(complement(g))


def maximal_cliques(g: Graph, *, cap: int | None = None) -> list[int]:
    """All inclusion-maximal cliques as vertex masks (pivoting enumeration).

    Without a cap the graph must have n <= ORACLE_MAX_N; with a cap the
    enumeration aborts with CliqueCapError once more than `cap` cliques
    have been emitted.
    """
    if g.n > ORACLE_MAX_N and cap is None:
        raise ScaleError(
            f"maximal_cliques without a cap handles n <= {ORACLE_MAX_N}, got {g.n}"
        )
    rows = g.rows
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            out.append(r)
            if cap is not None and len(out) > cap:
                raise CliqueCapError(f"more than {cap} maximal cliques")
            return
        pivot = -1
        pivot_score = -1
        for u in iter_bits(p | x):
            score = (p & rows[u]).bit_count()
            if score > pivot_score:
                pivot_score = score
                pivot = u
        for v in iter_bits(p & ~rows[pivot]):
            bit = 1 << v
            bk(r | bit, p & rows[v], x & rows[v])
            p &= ~bit
            x |= bit

    bk(0, g.vertex_mask(), 0)
    return sorted(out)


def contains_induced(g: Graph, h: Graph) -> tuple[int, ...] | None:
    """An injective map (pattern vertex i -> host vertex) preserving edges
    and non-edges, or None."""
    if h.n > INDUCED_MAX_PATTERN:
        raise ScaleError(
            f"contains_induced patterns are limited to {INDUCED_MAX_PATTERN} vertices"
        )
    if h.n > g.n:
        return None
    order = sorted(range(h.n), key=lambda v: (-h.degree(v), v))
    mapping = [-1] * h.n
    full = g.vertex_mask()

    def bt(i: int, used: int) -> bool:
        if i == h.n:
            return True
        pv = order[i]
        cand = full & ~used
        for j in range(i):
            qv = order[j]
            w = mapping[qv]
            if h.has_edge(pv, qv):
                cand &= g.rows[w]
            else:
                cand &= ~g.rows[w]
        for v in iter_bits(cand):
            mapping[pv] = v
            if bt(i + 1, used | (1 << v)):
                return True
        mapping[pv] = -1
        return False

    if bt(0, 0):
        return tuple(mapping)
    return None


def _unipolar_witness(g: Graph) -> int | None:
    """Smallest central-clique mask C with g - C a disjoint union of cliques,
    or None.  Subset dynamic programming, so only for small n."""
    n = g.n
    rows = g.rows
    size = 1 << n
    isclq = bytearray(size)
    isclq[0] = 1
    for mask in range(1, size):
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        isclq[mask] = 1 if isclq[rest] and (rows[v] & rest) == rest else 0
    cluster = bytearray(size)
    cluster[0] = 1
    for mask in range(1, size):
        v = (mask & -mask).bit_length() - 1
        comp = component_of(g, v, mask)
        cluster[mask] = 1 if isclq[comp] and cluster[mask & ~comp] else 0
    full = size - 1
    for c in range(size):
        if isclq[c] and cluster[full & ~c]:
            return c
    return None


def classify_gs(h: Graph) -> GSClass:
    """Membership of h among unipolar / co-unipolar graphs, with a witness
    central set (for h itself when unipolar, else for its complement)."""
    if h.n > GS_MAX_N:
        raise ScaleError(f"classify_gs handles n <= {GS_MAX_N}, got {h.n}")
    wu = _unipolar_witness(h)
    wc = _unipolar_witness(complement(h))
    if wu is not None and wc is not None:
        tag = GSTag.BOTH
    elif wu is not None:
        tag = GSTag.UNIPOLAR_ONLY
    elif wc is not None:
        tag = GSTag.CO_UNIPOLAR_ONLY
    else:
        tag = GSTag.NOT_GS
    return GSClass(tag=tag, witness_central=wu if wu is not None else wc)


# -- matching ---------------------------------------------------------------------


@dataclass(frozen=True)
class MatchingResult:
    pairs: tuple[tuple[int, int], ...]
    complete: bool  # covers every left vertex

    @property
    def size(self) -> int:
        return len(self.pairs)


def max_bipartite_matching(left: int, right: int, g: Graph) -> MatchingResult:
    """Maximum matching in the bipartite subgraph between the disjoint vertex
    sets left and right (Hopcroft-Karp)."""
    if left & right:
        raise ValidationError("left and right overlap")
    left_list = bit_list(left)
    match_l: dict[int, int] = {}
    match_r: dict[int, int] = {}
    inf = 1 << 30
    dist: dict[int, int] = {}

    def bfs() -> bool:
        dist.clear()
        queue = []
        for l in left_list:
            if l not in match_l:
                dist[l] = 0
                queue.append(l)
        found = False
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for v in iter_bits(g.rows[u] & right):
                w = match_r.get(v)
                if w is None:
                    found = True
                elif w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in iter_bits(g.rows[u] & right):
            w = match_r.get(v)
            if w is None or (dist.get(w, inf) == dist.get(u, inf) + 1 and dfs(w)):
                match_r[v] = u
                match_l[u] = v
                return True
        dist[u] = inf
        return False

    while bfs():
        for l in left_list:
            if l not in match_l:
                dfs(l)
    pairs = tuple((l, match_l[l]) for l in left_list if l in match_l)
    return MatchingResult(pairs=pairs, complete=len(pairs) == len(left_list))


def _greedy_matching_size(left: int, right: int, g: Graph) -> int:
    count = 0
    avail = right
    for x in iter_bits(left):
        cand = g.rows[x] & avail
        if cand:
            avail &= ~(cand & -cand)
            count += 1
    return count


# -- connectivity -----------------------------------------------------------------


class _SplitNetwork:
    """Vertex-split flow network for g, built once and re-capacitated per
    source/sink pair.  Node in(x)=2x, out(x)=2x+1; split arc ids 2x/2x+1;
    each undirected edge contributes two infinite forward arcs."""

    BIG = 1 << 40

    def __init__(self, g: Graph):
        n = g.n
        edges = list(g.edges())
        n_nodes = 2 * n
        n_arcs = 2 * n + 4 * len(edges)
        arc_to = np.empty(n_arcs, np.int32)
        arc_tail = np.empty(n_arcs, np.int32)
        cap0 = np.zeros(n_arcs, np.int64)
        for x in range(n):
            arc_to[2 * x] = 2 * x + 1
            arc_tail[2 * x] = 2 * x
            arc_to[2 * x + 1] = 2 * x
            arc_tail[2 * x + 1] = 2 * x + 1
            cap0[2 * x] = 1
        a = 2 * n
        for v, u in edges:
            for x, y in ((v, u), (u, v)):
                arc_to[a] = 2 * y
                arc_tail[a] = 2 * x + 1
                cap0[a] = self.BIG
                arc_to[a + 1] = 2 * x + 1
                arc_tail[a + 1] = 2 * y
                a += 2
        counts = np.bincount(arc_tail, minlength=n_nodes)
        indptr = np.zeros(n_nodes + 1, np.int64)
        np.cumsum(counts, out=indptr[1:])
        arc_index = np.empty(n_arcs, np.int32)
        fill = indptr[:-1].copy()
        for arc in range(n_arcs):
            t = arc_tail[arc]
            arc_index[fill[t]] = arc
            fill[t] += 1
        self.indptr = indptr
        self.arc_index = arc_index
        self.arc_to = arc_to
        self.cap0 = cap0

    def min_vertex_cut(self, u: int, v: int, limit: int) -> int:
        cap = self.cap0.copy()
        cap[2 * u] = self.BIG
        cap[2 * v] = self.BIG
        flow = _kernels.dinic_maxflow(
            self.indptr, self.arc_index, self.arc_to, cap, 2 * u + 1, 2 * v, limit
        )
        return int(flow)


def connectivity(g: Graph) -> int:
    """Exact vertex connectivity; kappa(K_n) = n-1 by convention."""
    n = g.n
    if n == 1:
        return 0
    degs = degrees(g)
    delta = min(degs)
    if delta == 0:
        return 0
    if delta == n - 1:
        return n - 1
    v0 = degs.index(delta)
    full = g.vertex_mask()
    pairs: list[tuple[int, int]] = []
    for u in iter_bits(full & ~g.rows[v0] & ~(1 << v0)):
        pairs.append((v0, u))
    nb = bit_list(g.rows[v0])
    for i, x in enumerate(nb):
        for y in nb[i + 1 :]:
            if not g.has_edge(x, y):
                pairs.append((x, y))
    best = delta
    net = _SplitNetwork(g)
    for u, v in pairs:
        if best == 0:
            break
        common = (g.rows[u] & g.rows[v]).bit_count()
        if common >= best:
            continue
        lu = g.rows[u] & ~g.rows[v] & ~(1 << v)
        rv = g.rows[v] & ~g.rows[u] & ~(1 << u)
        if common + _greedy_matching_size(lu, rv, g) >= best:
            continue
        if common + max_bipartite_matching(lu, rv, g).size >= best:
            continue
        lam = net.min_vertex_cut(u, v, best)
        if lam < best:
            best = lam
    return best


# -- edge colouring ---------------------------------------------------------------


@dataclass(frozen=True)
class EdgeColouring:
    """colours maps each edge (u, v) with u < v to a colour in 0..palette-1;
    certified means num_colours is proven equal to the chromatic index."""

    colours: dict[tuple[int, int], int]
    num_colours: int
    palette: int
    certified: bool


def _assert_proper(g: Graph, col: EdgeColouring) -> None:
    seen: dict[tuple[int, int], int] = {}
    edge_set = set()
    for v, u in g.edges():
        edge_set.add((v, u))
        c = col.colours[(v, u)]
        if not 0 <= c < max(col.palette, 1):
            raise AssertionError(f"colour {c} outside palette at edge {(v, u)}")
        for end in (v, u):
            key = (end, c)
            if key in seen:
                raise AssertionError(f"colour {c} repeated at vertex {end}")
            seen[key] = 1
    if set(col.colours) != edge_set:
        raise AssertionError("colouring does not cover exactly the edge set")
    if len(set(col.colours.values())) != col.num_colours and edge_set:
        raise AssertionError("num_colours mismatch")


def _canonical_remap(g: Graph, cmat: np.ndarray, palette: int, certified: bool) -> EdgeColouring:
    n = g.n
    remap: dict[int, int] = {}
    colours: dict[tuple[int, int], int] = {}
    for v, u in sorted(g.edges()):
        c = int(cmat[v * n + u])
        if c not in remap:
            remap[c] = len(remap)
        colours[(v, u)] = remap[c]
    out = EdgeColouring(
        colours=colours,
        num_colours=len(remap),
        palette=palette,
        certified=certified,
    )
    if CHECK_COLOURINGS:
        _assert_proper(g, out)
    return out


def _mg_state(n: int, pal: int) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.full(n * n, -1, np.int32),
        np.full(n * pal, -1, np.int32),
    )


def _mg_edges(edges: list[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    eu = np.asarray([e[0] for e in edges], np.int32)
    ev = np.asarray([e[1] for e in edges], np.int32)
    return eu, ev


def vizing_colour(g: Graph) -> EdgeColouring:
    """A proper edge colouring with at most Delta+1 colours (fan iteration)."""
    degs = degrees(g)
    cap_delta = max(degs) if degs else 0
    edges = sorted(g.edges())
    if not edges:
        out = EdgeColouring(colours={}, num_colours=0, palette=0, certified=True)
        if CHECK_COLOURINGS:
            _assert_proper(g, out)
        return out
    pal = cap_delta + 1
    cmat, pcol = _mg_state(g.n, pal)
    eu, ev = _mg_edges(edges)
    rc = _kernels.mg_core(g.n, pal, eu, ev, cmat, pcol)
    if rc != 0:
        raise RuntimeError(f"fan iteration failed with code {rc}")
    used = len({int(cmat[v * g.n + u]) for v, u in edges})
    return _canonical_remap(g, cmat, pal, certified=used <= cap_delta)


def bipartition(g: Graph) -> tuple[int, int] | None:
    """(left mask, right mask) when g is bipartite, else None.  Isolated
    vertices land on the left."""
    side = [-1] * g.n
    for start in range(g.n):
        if side[start] >= 0:
            continue
        side[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for u in iter_bits(g.rows[v]):
                if side[u] < 0:
                    side[u] = 1 - side[v]
                    queue.append(u)
                elif side[u] == side[v]:
                    return None
    left = 0
    right = 0
    for v, s in enumerate(side):
        if s == 0:
            left |= 1 << v
        else:
            right |= 1 << v
    return left, right


def _koenig_colour(g: Graph, cap_delta: int) -> EdgeColouring:
    """Delta-edge-colouring of a bipartite graph by alternating-path repair."""
    n = g.n
    pal_mask = (1 << cap_delta) - 1
    used = [0] * n
    partner: list[dict[int, int]] = [dict() for _ in range(n)]
    cmat = np.full(n * n, -1, np.int32)

    def assign(a: int, b: int, c: int) -> None:
        used[a] |= 1 << c
        used[b] |= 1 << c
        partner[a][c] = b
        partner[b][c] = a
        cmat[a * n + b] = c
        cmat[b * n + a] = c

    def clear(a: int, b: int, c: int) -> None:
        used[a] &= ~(1 << c)
        used[b] &= ~(1 << c)
        del partner[a][c]
        del partner[b][c]
        cmat[a * n + b] = -1
        cmat[b * n + a] = -1

    for v, u in sorted(g.edges()):
        common = ~(used[v] | used[u]) & pal_mask
        if common:
            c = (common & -common).bit_length() - 1
            assign(v, u, c)
            continue
        c = ((~used[v] & pal_mask) & -(~used[v] & pal_mask)).bit_length() - 1
        d = ((~used[u] & pal_mask) & -(~used[u] & pal_mask)).bit_length() - 1
        path = []
        cur = v
        col = d
        while col in partner[cur]:
            nxt = partner[cur][col]
            path.append((cur, nxt, col))
            cur = nxt
            col = c if col == d else d
        for a, b, oc in path:
            clear(a, b, oc)
        for a, b, oc in path:
            assign(a, b, c if oc == d else d)
        if used[u] & (1 << d):
            raise AssertionError("alternating path reached the far endpoint")
        assign(v, u, d)
    return _canonical_remap(g, cmat, cap_delta, certified=True)


def chromatic_index(g: Graph) -> tuple[int, EdgeColouring]:
    """The chromatic index together with a colouring.  The returned value is
    certified exact for edgeless graphs, bipartite graphs, graphs with a
    unique maximum-degree vertex, and whenever only Delta colours were used;
    otherwise it is Delta+1 with certified=False (the true value may be
    Delta)."""
    degs = degrees(g)
    cap_delta = max(degs) if degs else 0
    edges = sorted(g.edges())
    if not edges:
        out = EdgeColouring(colours={}, num_colours=0, palette=0, certified=True)
        if CHECK_COLOURINGS:
            _assert_proper(g, out)
        return 0, out
    if bipartition(g) is not None:
        out = _koenig_colour(g, cap_delta)
        return cap_delta, out
    if degs.count(cap_delta) == 1:
        out = _unique_max_colour(g, degs, cap_delta)
        if out is not None:
            return cap_delta, out
    out = vizing_colour(g)
    if out.num_colours <= cap_delta:
        return cap_delta, out
    return cap_delta + 1, out


def _unique_max_colour(
    g: Graph, degs: list[int], cap_delta: int
) -> EdgeColouring | None:
    """Delta-colouring when exactly one vertex has maximum degree: colour
    g minus one edge at that vertex (max degree drops, so palette Delta
    suffices), then insert the held-out edge with the same palette; every
    vertex still has a free colour throughout the insertion."""
    v0 = degs.index(cap_delta)
    u0 = (g.rows[v0] & -g.rows[v0]).bit_length() - 1
    held = (min(v0, u0), max(v0, u0))
    rest = [e for e in sorted(g.edges()) if e != held]
    pal = cap_delta
    cmat, pcol = _mg_state(g.n, pal)
    if rest:
        eu, ev = _mg_edges(rest)
        rc = _kernels.mg_core(g.n, pal, eu, ev, cmat, pcol)
        if rc != 0:
            return None
    eu, ev = _mg_edges([(v0, u0)])
    rc = _kernels.mg_core(g.n, pal, eu, ev, cmat, pcol)
    if rc != 0:
        return None
    return _canonical_remap(g, cmat, pal, certified=True)
