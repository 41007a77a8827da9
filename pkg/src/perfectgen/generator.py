"""Random generalised split graphs: quadruple sampling, assembly, provenance.

A sample is described by a quadruple (b, k, sigma, cross, pi): a sign, a
central-clique size drawn from the L(n) distribution, a uniform partition of
the remaining n-k vertices into side blocks, fair cross bits between the
central set and the side vertices, and a relabelling permutation.  ``rho``
assembles the graph; ``gen`` composes the two and returns the graph together
with its induced arrangement.

Draw order (pinned for bit-reproducibility; documented in the README):
  1. sign: one ``rng.integers(0, 2)`` draw, consumed even when forced_sign
     is given, so forced and free runs share the rest of the stream;
  2. k: one ``rng.random()`` (inverse-cdf lookup);
  3. sigma: one ``rng.random()`` for the urn count plus m urn labels via
     ``rng.integers(0, K, size=m)``, skipped entirely when m = 0;
  4. cross bits: ``rng.integers(0, 2, size=(k, m))``, skipped when k*m = 0;
  5. pi: one ``rng.permutation(n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import ArrangementMismatchError, ScaleError, ValidationError
from .graphcore import Graph, bit_list, bits_of, complement, iter_bits
from .lndist import LDistribution, build, exact_ell, sample
from .partitions import SetPartition, sample_uniform

__all__ = [
    "GenQuadruple",
    "Arrangement",
    "gen_quadruple",
    "rho",
    "gen",
    "gen_plus",
    "gen_minus",
    "exact_gen_law",
    "EXACT_LAW_MAX_N",
]

EXACT_LAW_MAX_N = 6


def _check_sign(sign: int) -> int:
    if sign not in (-1, 1):
        raise ValidationError(f"sign must be +1 or -1, got {sign!r}")
    return sign


@dataclass(frozen=True)
class GenQuadruple:
    """(b, k, sigma, cross, pi).  ``sigma`` partitions {0..m-1}, standing for
    the side vertices {k..n-1} of the unpermuted graph (add k to an element
    to get its vertex label before pi is applied)."""

    b: int
    k: int
    sigma: SetPartition
    cross: tuple[int, ...]  # one m-bit mask per central vertex 0..k-1
    pi: tuple[int, ...]

    def __post_init__(self):
        _check_sign(self.b)
        n = self.k + self.sigma.m
        if self.k < 0:
            raise ValidationError("k must be nonnegative")
        if len(self.cross) != self.k:
            raise ValidationError("cross needs one bit row per central vertex")
        full = (1 << self.sigma.m) - 1
        if any(row & ~full for row in self.cross):
            raise ValidationError("cross rows must fit in m bits")
        if sorted(self.pi) != list(range(n)):
            raise ValidationError("pi must be a permutation of 0..n-1")

    @property
    def n(self) -> int:
        return self.k + self.sigma.m

    def to_json_obj(self) -> dict:
        m = self.sigma.m
        return {
            "n": self.n,
            "sign": self.b,
            "k": self.k,
            "side_blocks": [[e + self.k for e in blk] for blk in self.sigma.blocks()],
            "cross_rows_hex": [format(row, "x") for row in self.cross],
            "cross_row_bits": m,
            "pi": list(self.pi),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GenQuadruple":
        try:
            k = int(obj["k"])
            blocks = [[int(v) - k for v in blk] for blk in obj["side_blocks"]]
            cross = tuple(int(row, 16) for row in obj["cross_rows_hex"])
            pi = tuple(int(v) for v in obj["pi"])
            b = int(obj["sign"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed quadruple object: {exc}") from exc
        m = sum(len(blk) for blk in blocks)
        block_of = [-1] * m
        for bid, blk in enumerate(blocks):
            for e in blk:
                if not 0 <= e < m or block_of[e] != -1:
                    raise ValidationError("side_blocks must partition {k..n-1}")
                block_of[e] = bid
        return cls(b=b, k=k, sigma=SetPartition(m, tuple(block_of)), cross=cross, pi=pi)


@dataclass(frozen=True)
class Arrangement:
    """A graph with a certified split: central set plus side parts.

    sign=+1: central induces a clique, each side part induces a clique, and
    no edges run between distinct side parts.  sign=-1: the same holds in
    the complement.
    """

    graph: Graph
    central: int
    side_parts: tuple[int, ...]
    sign: int

    def __post_init__(self):
        _check_sign(self.sign)

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def side_mask(self) -> int:
        mask = 0
        for part in self.side_parts:
            mask |= part
        return mask

    def part_of(self, v: int) -> int | None:
        """Index of the side part containing v, or None for central vertices."""
        bit = 1 << v
        for i, part in enumerate(self.side_parts):
            if part & bit:
                return i
        return None

    def validate(self) -> None:
        """Raise ArrangementMismatchError unless the invariants hold for graph."""
        g = self.graph
        full = g.vertex_mask()
        if self.central & ~full or self.side_mask & ~full:
            raise ArrangementMismatchError("arrangement names vertices outside the graph")
        if self.central & self.side_mask:
            raise ArrangementMismatchError("central set overlaps a side part")
        if (self.central | self.side_mask) != full:
            raise ArrangementMismatchError("arrangement does not cover every vertex")
        cover = 0
        for part in self.side_parts:
            if part == 0:
                raise ArrangementMismatchError("empty side part")
            if part & cover:
                raise ArrangementMismatchError("side parts overlap")
            cover |= part
        h = g if self.sign == 1 else complement(g)
        _require_clique(h, self.central, "central set")
        for part in self.side_parts:
            _require_clique(h, part, "side part")
        for v in iter_bits(self.side_mask):
            part = self.side_parts[self.part_of(v)]
            stray = h.rows[v] & self.side_mask & ~part
            if stray:
                raise ArrangementMismatchError(
                    f"edge between side parts at vertex {v}"
                    + ("" if self.sign == 1 else " (in the complement)")
                )

    def to_json_obj(self) -> dict:
        return {
            "sign": self.sign,
            "central": bit_list(self.central),
            "side_parts": [bit_list(p) for p in self.side_parts],
        }

    @classmethod
    def from_json_obj(cls, g: Graph, obj: dict) -> "Arrangement":
        try:
            sign = int(obj["sign"])
            central = bits_of(int(v) for v in obj["central"])
            parts = tuple(bits_of(int(v) for v in blk) for blk in obj["side_parts"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed arrangement object: {exc}") from exc
        arr = cls(graph=g, central=central, side_parts=parts, sign=sign)
        arr.validate()
        return arr


def _require_clique(g: Graph, mask: int, what: str) -> None:
    for v in iter_bits(mask):
        want = mask & ~(1 << v)
        if g.rows[v] & want != want:
            raise ArrangementMismatchError(f"{what} is not a clique at vertex {v}")


def gen_quadruple(
    n: int, rng: np.random.Generator, forced_sign: int | None = None
) -> GenQuadruple:
    if n < 1:
        raise ValidationError("n must be at least 1")
    if forced_sign is not None:
        _check_sign(forced_sign)
    coin = int(rng.integers(0, 2))
    b = forced_sign if forced_sign is not None else (1 if coin == 0 else -1)
    k = sample(_dist_for(n), rng)
    sigma = sample_uniform(n - k, rng)
    m = n - k
    if k and m:
        bits = rng.integers(0, 2, size=(k, m), dtype=np.uint8)
        cross = tuple(
            int.from_bytes(np.packbits(bits[i], bitorder="little").tobytes(), "little")
            for i in range(k)
        )
    else:
        cross = (0,) * k
    pi = tuple(int(v) for v in rng.permutation(n))
    return GenQuadruple(b=b, k=k, sigma=sigma, cross=cross, pi=pi)


@lru_cache(maxsize=64)
def _dist_for(n: int) -> LDistribution:
    return build(n)


def rho(q: GenQuadruple) -> tuple[Graph, Arrangement]:
    """Assemble the graph: central clique + side-block cliques, cross bits,
    complement when b=-1, then relabel by pi."""
    n, k, m = q.n, q.k, q.sigma.m
    adj = np.zeros((n, n), dtype=bool)
    if k:
        adj[:k, :k] = True
    blocks = q.sigma.blocks()
    for blk in blocks:
        verts = [k + e for e in blk]
        adj[np.ix_(verts, verts)] = True
    if k and m:
        rows = np.frombuffer(
            b"".join(
                row.to_bytes((m + 7) // 8, "little") for row in q.cross
            ),
            dtype=np.uint8,
        ).reshape(k, (m + 7) // 8)
        bits = np.unpackbits(rows, axis=1, bitorder="little")[:, :m].astype(bool)
        adj[:k, k:] = bits
        adj[k:, :k] = bits.T
    if q.b == -1:
        adj = ~adj
    np.fill_diagonal(adj, False)
    pi = np.asarray(q.pi, dtype=np.intp)
    if np.array_equal(pi, np.arange(n)):
        final = adj
        image = list(range(n))
    else:
        pinv = np.empty(n, dtype=np.intp)
        pinv[pi] = np.arange(n)
        final = adj[np.ix_(pinv, pinv)]
        image = list(q.pi)
    g = Graph.from_numpy(final, check=False)
    central = bits_of(image[v] for v in range(k))
    parts = tuple(bits_of(image[k + e] for e in blk) for blk in blocks)
    return g, Arrangement(graph=g, central=central, side_parts=parts, sign=q.b)


def gen(n: int, rng: np.random.Generator) -> tuple[Graph, Arrangement]:
    return rho(gen_quadruple(n, rng))


def gen_plus(n: int, rng: np.random.Generator) -> tuple[Graph, Arrangement]:
    return rho(gen_quadruple(n, rng, forced_sign=1))


def gen_minus(n: int, rng: np.random.Generator) -> tuple[Graph, Arrangement]:
    return rho(gen_quadruple(n, rng, forced_sign=-1))


# -- exact tiny-n law -------------------------------------------------------------


def r_plus(g: Graph) -> int:
    """Number of central sets C such that C is a clique and g - C is a
    disjoint union of cliques (C = empty set allowed)."""
    n = g.n
    count = 0
    for c in range(1 << n):
        if _is_clique(g, c) and _rest_is_cluster(g, g.vertex_mask() & ~c):
            count += 1
    return count


def _is_clique(g: Graph, mask: int) -> bool:
    for v in iter_bits(mask):
        want = mask & ~(1 << v)
        if g.rows[v] & want != want:
            return False
    return True


def _rest_is_cluster(g: Graph, mask: int) -> bool:
    """True iff the subgraph induced on mask is a disjoint union of cliques."""
    todo = mask
    while todo:
        v = (todo & -todo).bit_length() - 1
        comp = 1 << v
        frontier = comp
        while frontier:
            grow = 0
            for u in iter_bits(frontier):
                grow |= g.rows[u] & mask & ~comp
            comp |= grow
            frontier = grow
        if not _is_clique(g, comp):
            return False
        todo &= ~comp
    return True


def exact_gen_law(n: int) -> dict[Graph, Fraction]:
    """The exact output law on labelled n-vertex graphs,
    P(G) = (R+(G) + R+(complement G)) / (2 L_n), as rationals summing to 1."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    if n > EXACT_LAW_MAX_N:
        raise ScaleError(
            f"exact_gen_law enumerates all 2^(n(n-1)/2) graphs; n={n} exceeds {EXACT_LAW_MAX_N}"
        )
    pairs = [(u, v) for v in range(n) for u in range(v)]
    total = 2 * sum(exact_ell(n))
    law: dict[Graph, Fraction] = {}
    r_cache: dict[Graph, int] = {}
    for code in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if code >> i & 1]
        g = Graph.from_edges(n, edges)
        gc = complement(g)
        for h in (g, gc):
            if h not in r_cache:
                r_cache[h] = r_plus(h)
        law[g] = Fraction(r_cache[g] + r_cache[gc], total)
    assert sum(law.values()) == 1
    return law
