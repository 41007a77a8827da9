"""Slow reference implementations the tests compare against.

Everything here favours clarity over speed and shares no code with the
package: plain itertools enumeration, Fraction arithmetic, adjacency
checked edge by edge. Sizes are expected to stay in the single digits
to low teens.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product

from perfectgen.graphcore import Graph


def brute_alpha(g: Graph) -> int:
    """Largest stable set, by trying every subset."""
    best = 0
    verts = range(g.n)
    for k in range(g.n, 0, -1):
        for sub in combinations(verts, k):
            if all(not g.has_edge(u, v) for u, v in combinations(sub, 2)):
                return k
    return best


def brute_omega(g: Graph) -> int:
    best = 0
    verts = range(g.n)
    for k in range(g.n, 0, -1):
        for sub in combinations(verts, k):
            if all(g.has_edge(u, v) for u, v in combinations(sub, 2)):
                return k
    return best


def brute_maximal_cliques(g: Graph) -> set[frozenset[int]]:
    """All maximal cliques, including isolated vertices as singletons."""
    cliques: list[frozenset[int]] = []
    for k in range(1, g.n + 1):
        for sub in combinations(range(g.n), k):
            if all(g.has_edge(u, v) for u, v in combinations(sub, 2)):
                cliques.append(frozenset(sub))
    maximal = set()
    for c in cliques:
        if not any(c < d for d in cliques):
            maximal.add(c)
    return maximal


def brute_connectivity(g: Graph) -> int:
    """Vertex connectivity by deleting every subset in turn."""
    n = g.n
    if n <= 1:
        return 0
    if all(g.has_edge(u, v) for u, v in combinations(range(n), 2)):
        return n - 1
    if not _connected_after_removal(g, frozenset()):
        return 0
    for k in range(1, n - 1):
        for cut in combinations(range(n), k):
            if not _connected_after_removal(g, frozenset(cut)):
                return k
    return n - 1


def _connected_after_removal(g: Graph, removed: frozenset[int]) -> bool:
    rest = [v for v in range(g.n) if v not in removed]
    if len(rest) <= 1:
        return True
    seen = {rest[0]}
    frontier = [rest[0]]
    while frontier:
        u = frontier.pop()
        for v in rest:
            if v not in seen and g.has_edge(u, v):
                seen.add(v)
                frontier.append(v)
    return len(seen) == len(rest)


def brute_is_unipolar(g: Graph) -> bool:
    """Some clique whose removal leaves a disjoint union of cliques."""
    for k in range(g.n + 1):
        for central in combinations(range(g.n), k):
            cset = set(central)
            if not all(g.has_edge(u, v) for u, v in combinations(central, 2)):
                continue
            if _rest_is_cluster(g, cset):
                return True
    return False


def _rest_is_cluster(g: Graph, removed: set[int]) -> bool:
    rest = [v for v in range(g.n) if v not in removed]
    comp_of: dict[int, int] = {}
    for v in rest:
        if v in comp_of:
            continue
        comp_of[v] = v
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for w in rest:
                if w not in comp_of and g.has_edge(u, w):
                    comp_of[w] = v
                    frontier.append(w)
    groups: dict[int, list[int]] = {}
    for v, root in comp_of.items():
        groups.setdefault(root, []).append(v)
    for members in groups.values():
        if not all(g.has_edge(u, v) for u, v in combinations(members, 2)):
            return False
    return True


def bell_numbers(count: int) -> list[int]:
    """B_0 .. B_{count-1} via the Bell triangle."""
    if count <= 0:
        return []
    bells = [1]
    row = [1]
    while len(bells) < count:
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        bells.append(row[0])
    return bells


def brute_partitions(m: int) -> list[tuple[int, ...]]:
    """Every set partition of {0..m-1} as a canonical block-id tuple."""
    if m == 0:
        return [()]
    results: list[tuple[int, ...]] = []

    def extend(prefix: list[int], used: int) -> None:
        if len(prefix) == m:
            results.append(tuple(prefix))
            return
        for b in range(used + 1):
            extend(prefix + [b], used)
        extend(prefix + [used + 1], used + 1)

    extend([0], 0)
    return results


def hom_count(f: Graph, g: Graph) -> int:
    """Adjacency-preserving maps from f to g, counted one by one."""
    total = 0
    f_edges = [(u, v) for u, v in combinations(range(f.n), 2) if f.has_edge(u, v)]
    for phi in product(range(g.n), repeat=f.n):
        if all(g.has_edge(phi[u], phi[v]) for u, v in f_edges):
            total += 1
    return total


def inj_count(f: Graph, g: Graph) -> int:
    total = 0
    f_edges = [(u, v) for u, v in combinations(range(f.n), 2) if f.has_edge(u, v)]
    for phi in permutations(range(g.n), f.n):
        if all(g.has_edge(phi[u], phi[v]) for u, v in f_edges):
            total += 1
    return total


def t_oracle(f: Graph, blocks: list[Fraction], weights: list[list[Fraction]]) -> Fraction:
    """Step-function homomorphism density by direct summation."""
    total = Fraction(0)
    k = len(blocks)
    f_edges = [(u, v) for u, v in combinations(range(f.n), 2) if f.has_edge(u, v)]
    for assign in product(range(k), repeat=f.n):
        term = Fraction(1)
        for v in range(f.n):
            term *= blocks[assign[v]]
        for u, v in f_edges:
            term *= weights[assign[u]][assign[v]]
        total += term
    return total


def brute_chromatic_index(g: Graph) -> int:
    """Minimum proper edge colouring size, by backtracking."""
    edges = [(u, v) for u, v in combinations(range(g.n), 2) if g.has_edge(u, v)]
    if not edges:
        return 0
    max_deg = max(sum(1 for v in range(g.n) if g.has_edge(u, v)) for u in range(g.n))

    def feasible(c: int) -> bool:
        colour_of: dict[tuple[int, int], int] = {}

        def ok(idx: int, col: int) -> bool:
            u, v = edges[idx]
            for (a, b), cc in colour_of.items():
                if cc == col and (a in (u, v) or b in (u, v)):
                    return False
            return True

        def go(idx: int) -> bool:
            if idx == len(edges):
                return True
            for col in range(c):
                if ok(idx, col):
                    colour_of[edges[idx]] = col
                    if go(idx + 1):
                        return True
                    del colour_of[edges[idx]]
            return False

        return go(0)

    return max_deg if feasible(max_deg) else max_deg + 1


def brute_matching_size(lefts: list[int], rights: list[int], g: Graph) -> int:
    """Maximum matching between the two given vertex lists."""

    def go(i: int, taken: frozenset[int]) -> int:
        if i == len(lefts):
            return 0
        best = go(i + 1, taken)
        for v in rights:
            if v not in taken and g.has_edge(lefts[i], v):
                best = max(best, 1 + go(i + 1, taken | {v}))
        return best

    return go(0, frozenset())


def clique_colouring_ok(g: Graph, colours: list[int]) -> bool:
    """Every maximal clique on two or more vertices sees both colours."""
    for c in brute_maximal_cliques(g):
        if len(c) >= 2 and len({colours[v] for v in c}) == 1:
            return False
    return True
