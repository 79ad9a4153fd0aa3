"""Build the vectorized, clique-decomposed standard form from parsed data.

The standard form solved internally is

    minimize    c @ x
    subject to  A @ x == b,  mat(x) PSD-completable on the extended pattern,

over the block-diagonal ambient matrix of order n (the sum of block sizes).
Because the input format poses a maximization of tr(F0 Y) (see
:mod:`chordalsdp.sdpa`), the objective vector is built as c = -vec(F0); every
reported objective is negated back into the file's convention.

Each block's aggregate pattern is extended and decomposed independently;
cliques never cross blocks, so the global decomposition is the concatenation
of the per-block ones. The consensus constraints linking x to the clique
blocks are never materialized: they enter the solver only through the
selector maps and the diagonal cover-count matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graphs import CliqueDecomposition, SparsityPattern, chordal_extend, maximal_cliques
from .sdpa import SdpProblem
from .symmat import SymMatrix

OBJECTIVE_SIGN = -1.0
"""Global sign relating reported objectives to the internal minimization.

The file convention maximizes tr(F0 Y); internally we minimize, so
c = OBJECTIVE_SIGN * vec(F0) and reported values are OBJECTIVE_SIGN times the
internal ones. Fixed by matching theta1's published optimum of 23.00.
"""


@dataclass(frozen=True, eq=False)
class DecomposedProblem:
    """Vectorized problem data plus the clique decomposition.

    ``D`` is the length n**2 diagonal of the summed selector normal matrices;
    its entry counts the cliques covering that vectorized coordinate, so it is
    positive wherever ``c`` or any row of ``A`` is nonzero.
    """

    n: int
    m: int
    c: np.ndarray
    A: sp.csr_matrix
    b: np.ndarray
    dec: CliqueDecomposition
    aggregate: SparsityPattern
    block_dims: tuple[int, ...]
    objective_sign: float = OBJECTIVE_SIGN

    @property
    def n_d(self) -> int:
        return self.dec.n_d

    @property
    def D(self) -> np.ndarray:
        return self.dec.cover_counts

    @property
    def p(self) -> int:
        return self.dec.p

    def block_local(self, node: int) -> tuple[int, int]:
        """Map a global matrix index to (block, local index), both 0-based."""
        offset = 0
        for blk, dim in enumerate(self.block_dims):
            size = abs(dim)
            if node < offset + size:
                return blk, node - offset
            offset += size
        raise IndexError(f"node {node} outside ambient dimension {self.n}")


def _block_edges(mats: list[SymMatrix]) -> set[tuple[int, int]]:
    edges = set()
    for mat_ in mats:
        for i, j, _v in mat_.entries:
            if i != j:
                edges.add((i, j))
    return edges


def aggregate_pattern(problem: SdpProblem) -> SparsityPattern:
    """Union of the nonzero patterns of F0 and all Fi, block-concatenated.

    Self-loops are implicit on every node, so diagonal entries never create
    edges; explicit zeros in the file count as structural nonzeros.
    """
    offsets = problem.block_offsets
    edges: set[tuple[int, int]] = set()
    for blk in range(len(problem.block_dims)):
        mats = [problem.C[blk]] + [problem.A[i][blk] for i in range(problem.m)]
        off = offsets[blk]
        edges.update((i + off, j + off) for i, j in _block_edges(mats))
    return SparsityPattern(problem.n_total, frozenset(edges))


def decompose(problem: SdpProblem, split_cones: bool = True) -> DecomposedProblem:
    """Assemble the decomposed standard form of a parsed problem.

    With ``split_cones=False`` each block stays one full cone (the selector
    stack reduces to per-block identity maps), which runs the identical
    pipeline on the undecomposed problem for comparison.
    """
    n = problem.n_total
    offsets = problem.block_offsets
    aggregate = aggregate_pattern(problem)

    global_cliques: list[list[int]] = []
    extended_edges: set[tuple[int, int]] = set()
    for blk, dim in enumerate(problem.block_dims):
        size = abs(dim)
        off = offsets[blk]
        local_edges = [
            (i - off, j - off) for i, j in aggregate.edges if off <= i and j < off + size
        ]
        local = SparsityPattern.from_edges(size, local_edges)
        if split_cones:
            extended = chordal_extend(local)
            local_dec = maximal_cliques(extended)
            cliques = [list(c + off) for c in local_dec.cliques]
        else:
            extended = SparsityPattern.complete(size)
            cliques = [list(range(off, off + size))]
        global_cliques.extend(cliques)
        extended_edges.update((i + off, j + off) for i, j in extended.edges)

    dec = CliqueDecomposition.build(
        n, global_cliques, SparsityPattern(n, frozenset(extended_edges))
    )

    c = np.zeros(n * n)
    for blk in range(len(problem.block_dims)):
        off = offsets[blk]
        for i, j, v in problem.C[blk].entries:
            gi, gj = i + off, j + off
            c[gj * n + gi] = OBJECTIVE_SIGN * v
            c[gi * n + gj] = OBJECTIVE_SIGN * v

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for row in range(problem.m):
        for blk in range(len(problem.block_dims)):
            off = offsets[blk]
            for i, j, v in problem.A[row][blk].entries:
                gi, gj = i + off, j + off
                rows.append(row)
                cols.append(gj * n + gi)
                vals.append(v)
                if gi != gj:
                    rows.append(row)
                    cols.append(gi * n + gj)
                    vals.append(v)
    A = sp.csr_matrix(
        (vals, (rows, cols)), shape=(problem.m, n * n), dtype=float
    )

    return DecomposedProblem(
        n=n,
        m=problem.m,
        c=c,
        A=A,
        b=problem.b.copy(),
        dec=dec,
        aggregate=aggregate,
        block_dims=problem.block_dims,
    )
