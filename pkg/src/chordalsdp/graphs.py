"""Graph machinery for clique-based cone decomposition.

A sparsity pattern is an undirected graph over matrix indices (0-based) with
an implicit self-loop at every node. Chordality is tested with maximum
cardinality search; non-chordal patterns are extended by greedy minimum-degree
elimination, whose fill-in edges are the added chords. Maximal cliques of a
chordal graph are read off a perfect elimination ordering.

Each clique C (sorted, size c) induces an entry-selector map: position
a*c + b of the clique-local vectorization picks flat index C[a]*n + C[b] of
the ambient length-n**2 vectorization. The rows of the selector are
orthonormal, so gather followed by scatter is the identity on clique space.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class NotChordal(ValueError):
    """Raised when an operation requires a chordal input graph."""


class DimensionMismatch(ValueError):
    """Raised when a vector does not match the decomposition's dimensions."""


@dataclass(frozen=True)
class SparsityPattern:
    """Undirected graph on nodes 0..n-1; self-loops are implicit everywhere."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"node count must be positive, got {self.n}")
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge ({i}, {j}) is not normalized within [0, {self.n})")

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "SparsityPattern":
        """Normalize arbitrary (i, j) pairs: order endpoints, drop self-loops."""
        edges = set()
        for i, j in pairs:
            if i == j:
                continue
            edges.add((min(i, j), max(i, j)))
        return cls(n, frozenset(edges))

    @classmethod
    def complete(cls, n: int) -> "SparsityPattern":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "SparsityPattern":
        return SparsityPattern.from_edges(self.n, list(self.edges) + list(extra))

    def contains(self, other: "SparsityPattern") -> bool:
        return other.n == self.n and other.edges <= self.edges


def mcs_order(g: SparsityPattern) -> list[int]:
    """Maximum cardinality search; returns a candidate elimination ordering.

    Nodes are visited by descending count of already-visited neighbors (ties
    broken by smallest index); the reversed visit order is a perfect
    elimination ordering exactly when the graph is chordal.
    """
    adj = g.adjacency()
    weight = [0] * g.n
    visited = [False] * g.n
    heap = [(0, v) for v in range(g.n)]
    heapq.heapify(heap)
    visit: list[int] = []
    while heap:
        negw, v = heapq.heappop(heap)
        if visited[v] or -negw != weight[v]:
            continue
        visited[v] = True
        visit.append(v)
        for u in adj[v]:
            if not visited[u]:
                weight[u] += 1
                heapq.heappush(heap, (-weight[u], u))
    visit.reverse()
    return visit


def _verify_peo(adj: list[set[int]], order: list[int]) -> bool:
    pos = {v: k for k, v in enumerate(order)}
    for v in order:
        later = [u for u in adj[v] if pos[u] > pos[v]]
        if len(later) <= 1:
            continue
        parent = min(later, key=pos.__getitem__)
        if not set(later) - {parent} <= adj[parent]:
            return False
    return True


def is_chordal(g: SparsityPattern) -> tuple[bool, list[int] | None]:
    """Test chordality; on success also return a perfect elimination ordering."""
    order = mcs_order(g)
    if _verify_peo(g.adjacency(), order):
        return True, order
    return False, None


def _min_degree_eliminate(adj: list[set[int]]) -> tuple[list[int], list[tuple[int, int]]]:
    """Greedy minimum-degree symbolic elimination on a mutable adjacency.

    Returns the elimination order and the fill-in edges added along the way.
    Ties are broken by smallest node index for reproducibility.
    """
    n = len(adj)
    heap = [(len(adj[v]), v) for v in range(n)]
    heapq.heapify(heap)
    eliminated = [False] * n
    order: list[int] = []
    fill: list[tuple[int, int]] = []
    while heap:
        deg, v = heapq.heappop(heap)
        if eliminated[v] or deg != len(adj[v]):
            continue
        eliminated[v] = True
        order.append(v)
        nbrs = sorted(adj[v])
        for u in nbrs:
            adj[u].discard(v)
        for a_idx, a in enumerate(nbrs):
            for b in nbrs[a_idx + 1 :]:
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
                    fill.append((a, b))
        for u in nbrs:
            heapq.heappush(heap, (len(adj[u]), u))
    return order, fill


def chordal_extend(g: SparsityPattern) -> SparsityPattern:
    """Return a chordal supergraph of ``g``.

    Chordal inputs are returned unchanged (a perfect elimination ordering has
    zero fill). Otherwise minimum-degree elimination supplies the chords.
    """
    chordal, _ = is_chordal(g)
    if chordal:
        return g
    _, fill = _min_degree_eliminate(g.adjacency())
    return g.with_edges(fill)


def _elimination_cliques(adj: list[set[int]], order: list[int]) -> list[frozenset[int]]:
    """Candidate cliques {v} + later neighbors for each v, then keep maximal ones."""
    pos = {v: k for k, v in enumerate(order)}
    cands = []
    for v in order:
        cands.append(frozenset([v] + [u for u in adj[v] if pos[u] > pos[v]]))
    kept: list[frozenset[int]] = []
    by_node: dict[int, list[frozenset[int]]] = {}
    for cand in sorted(set(cands), key=lambda s: (-len(s), sorted(s))):
        anchor = min(cand)
        if any(cand <= k for k in by_node.get(anchor, ())):
            continue
        kept.append(cand)
        for u in cand:
            by_node.setdefault(u, []).append(cand)
    return kept


def selector_map(clique: np.ndarray, n: int) -> np.ndarray:
    """Flat vec-indices picked by the clique's selector, in local row-major order."""
    c = np.asarray(clique, dtype=np.int64)
    return (np.add.outer(c * n, c)).ravel()


@dataclass(frozen=True, eq=False)
class CliqueDecomposition:
    """Maximal cliques of a chordal pattern plus their entry-selector maps.

    ``selector_maps[k]`` has length ``len(cliques[k])**2`` and lists, in
    clique-local order, the ambient flat indices the k-th selector gathers.
    ``cover_counts`` is the length n**2 diagonal of the summed selector
    normal matrices: entry l counts the cliques covering flat index l.
    """

    n: int
    cliques: tuple[np.ndarray, ...]
    extended_pattern: SparsityPattern
    selector_maps: tuple[np.ndarray, ...] = field(default=())
    sizes: np.ndarray = field(default=None)
    offsets: np.ndarray = field(default=None)
    n_d: int = 0
    gather_index: np.ndarray = field(default=None)
    cover_counts: np.ndarray = field(default=None)

    @classmethod
    def build(
        cls,
        n: int,
        cliques: Iterable[Iterable[int]],
        extended_pattern: SparsityPattern,
    ) -> "CliqueDecomposition":
        cls_cliques = tuple(
            np.array(sorted(c), dtype=np.int64)
            for c in sorted(cliques, key=lambda c: (min(c), tuple(sorted(c))))
        )
        maps = tuple(selector_map(c, n) for c in cls_cliques)
        sizes = np.array([len(c) for c in cls_cliques], dtype=np.int64)
        blocks = sizes * sizes
        offsets = np.concatenate([[0], np.cumsum(blocks)])
        gather = (
            np.concatenate(maps) if maps else np.empty(0, dtype=np.int64)
        )
        cover = np.bincount(gather, minlength=n * n).astype(float)
        return cls(
            n=n,
            cliques=cls_cliques,
            extended_pattern=extended_pattern,
            selector_maps=maps,
            sizes=sizes,
            offsets=offsets,
            n_d=int(blocks.sum()),
            gather_index=gather,
            cover_counts=cover,
        )

    @property
    def p(self) -> int:
        return len(self.cliques)

    def gather(self, x: np.ndarray) -> np.ndarray:
        """Stack all clique gathers: the action of the full selector stack."""
        return x[self.gather_index]

    def scatter(self, s: np.ndarray) -> np.ndarray:
        """Adjoint of :meth:`gather`: scatter-add clique blocks into ambient."""
        out = np.bincount(self.gather_index, weights=s, minlength=self.n * self.n)
        return out if out.dtype == np.float64 else out.astype(np.float64)

    def block(self, s: np.ndarray, k: int) -> np.ndarray:
        """View of clique k's segment inside a stacked length-n_d vector."""
        return s[self.offsets[k] : self.offsets[k + 1]]


def maximal_cliques(g: SparsityPattern, ambient_dim: int | None = None) -> CliqueDecomposition:
    """Enumerate the maximal cliques of a chordal pattern.

    Raises
    ------
    NotChordal
        If ``g`` has no perfect elimination ordering.
    """
    chordal, order = is_chordal(g)
    if not chordal:
        raise NotChordal("pattern is not chordal; extend it first")
    cliques = _elimination_cliques(g.adjacency(), order)
    return CliqueDecomposition.build(ambient_dim or g.n, cliques, g)


def selector_apply(dec: CliqueDecomposition, k: int, x: np.ndarray) -> np.ndarray:
    """Gather clique k's block from an ambient vectorized matrix."""
    x = np.asarray(x, dtype=float)
    if x.shape != (dec.n * dec.n,):
        raise DimensionMismatch(
            f"expected ambient vector of length {dec.n * dec.n}, got {x.shape}"
        )
    return x[dec.selector_maps[k]]


def selector_adjoint(dec: CliqueDecomposition, k: int, xk: np.ndarray) -> np.ndarray:
    """Scatter a clique-local block into an ambient vector (zeros elsewhere)."""
    xk = np.asarray(xk, dtype=float)
    size = int(dec.sizes[k])
    if xk.shape != (size * size,):
        raise DimensionMismatch(
            f"expected clique block of length {size * size}, got {xk.shape}"
        )
    out = np.zeros(dec.n * dec.n)
    out[dec.selector_maps[k]] = xk
    return out
