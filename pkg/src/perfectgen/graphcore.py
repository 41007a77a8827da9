"""Dense graph representation and bit-exact serialization.

Graphs are simple, undirected, on vertex set 0..n-1, stored as one Python
integer bitmask per row.  Row operations (AND/OR plus ``int.bit_count``)
are the workhorse of every analyzer in the package: an intersection of two
neighbourhoods is one big-int AND regardless of n.

Vertex sets are plain ``int`` bitmasks throughout (bit v set <=> vertex v is
a member); the helpers at the bottom convert between masks and iterables.
User-facing text (CLI output, reprs) keeps 0-based labels.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import Graph6ParseError, ValidationError

VertexSet = int  # bitmask over 0..n-1


class Graph:
    """Immutable simple graph on 0..n-1 with bitmask adjacency rows.

    ``rows[v]`` has bit ``u`` set iff uv is an edge.  The matrix is symmetric
    with zero diagonal; the constructor checks both (builders that already
    guarantee the invariants pass ``check=False``).
    """

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, rows: Sequence[int], *, check: bool = True):
        if n < 0:
            raise ValidationError("vertex count must be nonnegative")
        rows = tuple(rows)
        if len(rows) != n:
            raise ValidationError(f"expected {n} adjacency rows, got {len(rows)}")
        if check:
            full = (1 << n) - 1
            for v, row in enumerate(rows):
                if row & ~full:
                    raise ValidationError(f"row {v} has bits outside 0..{n - 1}")
                if row >> v & 1:
                    raise ValidationError(f"self-loop at vertex {v}")
            for v in range(n):
                for u in _iter_bits(rows[v]):
                    if not rows[u] >> v & 1:
                        raise ValidationError(f"adjacency not symmetric at ({u}, {v})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Graph is immutable")

    # -- basic queries ----------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbours(self, v: int) -> VertexSet:
        return self.rows[v]

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            for u in _iter_bits(self.rows[v] >> (v + 1) << (v + 1)):
                yield (v, u)

    def vertex_mask(self) -> VertexSet:
        return (1 << self.n) - 1

    # -- equality / hashing ------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self.rows == other.rows
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.n, self.rows))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n, check=False)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)], check=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, check=False)

    @classmethod
    def from_numpy(cls, adj: np.ndarray, *, check: bool = True) -> "Graph":
        """Build from a boolean/0-1 adjacency matrix (rows packed little-endian)."""
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise ValidationError("adjacency matrix must be square")
        packed = np.packbits(adj.astype(bool), axis=1, bitorder="little")
        rows = [int.from_bytes(packed[v].tobytes(), "little") for v in range(n)]
        return cls(n, rows, check=check)

    def to_numpy(self) -> np.ndarray:
        n = self.n
        nbytes = (n + 7) // 8
        buf = np.frombuffer(
            b"".join(r.to_bytes(nbytes, "little") for r in self.rows), dtype=np.uint8
        ).reshape(self.n, nbytes)
        return np.unpackbits(buf, axis=1, bitorder="little", count=n).astype(bool)


# -- elementary operations ---------------------------------------------------


def complement(g: Graph) -> Graph:
    """Edge ij present in the result iff absent in g (i != j); involution."""
    full = g.vertex_mask()
    return Graph(
        g.n, [full ^ (1 << v) ^ g.rows[v] for v in range(g.n)], check=False
    )


def induced_subgraph(g: Graph, s: VertexSet) -> Graph:
    """Subgraph on the vertices of ``s``, relabelled 0..|s|-1 in ascending order."""
    if s & ~g.vertex_mask():
        raise ValidationError("vertex set outside graph range")
    verts = list(_iter_bits(s))
    index = {v: i for i, v in enumerate(verts)}
    rows = [0] * len(verts)
    for v in verts:
        for u in _iter_bits(g.rows[v] & s):
            rows[index[v]] |= 1 << index[u]
    return Graph(len(verts), rows, check=False)


def degrees(g: Graph) -> list[int]:
    """Degree vector; sums to twice the edge count."""
    return [r.bit_count() for r in g.rows]


# -- graph6 ------------------------------------------------------------------
#
# De-facto standard format: N(n) size prefix followed by the strict upper
# triangle read column-wise ((0,1), (0,2), (1,2), (0,3), ...), packed into
# 6-bit groups big-endian, each emitted as one printable byte value+63.
# Unused padding bits in the last group are zero.


def graph6_encode(g: Graph) -> bytes:
    n = g.n
    if n > 1 << 16:
        raise ValidationError("graph6 support capped at n <= 65536")
    out = bytearray(_graph6_size_prefix(n))
    acc = 0
    nbits = 0
    for col in range(1, n):
        for row in range(col):
            acc = acc << 1 | (g.rows[row] >> col & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc, nbits = 0, 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def graph6_decode(data: bytes) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.rstrip(b"\n")
    if not data:
        raise Graph6ParseError("empty graph6 input (offset 0)")
    n, body_start = _graph6_read_size(data)
    nbits = n * (n - 1) // 2
    expect = body_start + (nbits + 5) // 6
    if len(data) != expect:
        raise Graph6ParseError(
            f"graph6 body for n={n} needs {expect - body_start} bytes, "
            f"found {len(data) - body_start} (offset {min(len(data), expect)})"
        )
    rows = [0] * n
    bit_idx = 0
    pairs = [(row, col) for col in range(1, n) for row in range(col)]
    for off in range(body_start, len(data)):
        b = data[off]
        if not 63 <= b <= 126:
            raise Graph6ParseError(f"byte 0x{b:02x} out of graph6 range (offset {off})")
        group = b - 63
        for k in range(5, -1, -1):
            bit = group >> k & 1
            if bit_idx < nbits:
                if bit:
                    row, col = pairs[bit_idx]
                    rows[row] |= 1 << col
                    rows[col] |= 1 << row
                bit_idx += 1
            elif bit:
                raise Graph6ParseError(f"nonzero padding bit (offset {off})")
    return Graph(n, rows, check=False)


def _graph6_size_prefix(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    # 63 <= n <= 258047: '~' then 18 bits in three 6-bit groups
    return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])


def _graph6_read_size(data: bytes) -> tuple[int, int]:
    b0 = data[0]
    if b0 == 126:
        if len(data) >= 2 and data[1] == 126:
            raise Graph6ParseError("graph6 '~~' size form exceeds supported n (offset 1)")
        if len(data) < 4:
            raise Graph6ParseError(f"truncated graph6 size prefix (offset {len(data)})")
        n = 0
        for off in (1, 2, 3):
            b = data[off]
            if not 63 <= b <= 126:
                raise Graph6ParseError(
                    f"byte 0x{b:02x} out of graph6 range (offset {off})"
                )
            n = n << 6 | (b - 63)
        return n, 4
    if not 63 <= b0 <= 125:
        raise Graph6ParseError(f"byte 0x{b0:02x} out of graph6 range (offset 0)")
    return b0 - 63, 1


# -- JSON edge-list format ----------------------------------------------------


def to_json_obj(g: Graph) -> dict:
    """``{"n": int, "edges": [[u, v], ...]}`` with u < v, 0-based."""
    return {"n": g.n, "edges": [[u, v] if u < v else [v, u] for u, v in g.edges()]}


def from_json_obj(obj: dict) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise ValidationError('graph JSON must be {"n": int, "edges": [[u,v],...]}')
    n = obj["n"]
    if not isinstance(n, int) or n < 0:
        raise ValidationError("graph JSON: n must be a nonnegative integer")
    edges = []
    for e in obj["edges"]:
        if not (isinstance(e, (list, tuple)) and len(e) == 2):
            raise ValidationError(f"graph JSON: bad edge entry {e!r}")
        u, v = e
        if not (isinstance(u, int) and isinstance(v, int) and 0 <= u < v < n):
            raise ValidationError(f"graph JSON: edge {e!r} must satisfy 0 <= u < v < n")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def to_json(g: Graph) -> str:
    return json.dumps(to_json_obj(g), sort_keys=True, separators=(",", ":"))


def from_json(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from None
    return from_json_obj(obj)


# -- vertex-set helpers --------------------------------------------------------


def bits_of(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


iter_bits = _iter_bits


def bit_list(mask: VertexSet) -> list[int]:
    return list(_iter_bits(mask))


def is_clique(g: Graph, mask: VertexSet) -> bool:
    """True iff every two vertices of mask are adjacent (empty set counts)."""
    for v in _iter_bits(mask):
        want = mask & ~(1 << v)
        if g.rows[v] & want != want:
            return False
    return True


def is_stable(g: Graph, mask: VertexSet) -> bool:
    """True iff mask induces no edge at all."""
    for v in _iter_bits(mask):
        if g.rows[v] & mask:
            return False
    return True


def component_of(g: Graph, v: int, within: VertexSet) -> VertexSet:
    """Connected component of v in the subgraph induced on `within`."""
    comp = (1 << v) & within
    frontier = comp
    while frontier:
        grow = 0
        for u in _iter_bits(frontier):
            grow |= g.rows[u] & within & ~comp
        comp |= grow
        frontier = grow
    return comp


def components(g: Graph, within: VertexSet | None = None) -> list[VertexSet]:
    """Connected components of the subgraph induced on `within` (default:
    the whole graph), ordered by smallest vertex."""
    todo = g.vertex_mask() if within is None else within
    out = []
    while todo:
        v = (todo & -todo).bit_length() - 1
        comp = component_of(g, v, todo)
        out.append(comp)
        todo &= ~comp
    return out
