"""Shared test oracles and toy-problem builders.

Everything here is deliberately independent of the code paths it checks:
eigenvalues come from a long-double Jacobi sweep, chordality from induced
subgraph enumeration, PSD completability from alternating projections, and
the embedding solves from dense factorizations.
"""

from __future__ import annotations

import itertools

import numpy as np
import scipy.sparse as sp

from chordalsdp.decompose import DecomposedProblem
from chordalsdp.graphs import SparsityPattern, chordal_extend, maximal_cliques
from chordalsdp.sdpa import SdpProblem
from chordalsdp.symmat import SymMatrix


# ---------------------------------------------------------------------------
# spectral oracle: cyclic Jacobi in extended precision


def jacobi_eigh(a: np.ndarray, sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Runs in numpy longdouble; independent of LAPACK and accurate well past
    float64 for the small matrices used in tests.
    """
    a = np.array(0.5 * (a + a.T), dtype=np.longdouble)
    n = a.shape[0]
    v = np.eye(n, dtype=np.longdouble)
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.square(a - np.diag(np.diag(a)))))
        if off < np.longdouble(1e-34) * (1 + np.abs(a).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) == 0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1))
                if theta == 0:
                    t = np.longdouble(1.0)
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]


def project_psd_reference(m: np.ndarray) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm, via the long-double Jacobi oracle."""
    w, v = jacobi_eigh(m)
    w = np.maximum(w, np.longdouble(0.0))
    return np.asarray((v * w) @ v.T, dtype=float)


# ---------------------------------------------------------------------------
# graph oracles


def induced_cycle_free(pattern: SparsityPattern) -> bool:
    """Chordality by brute force: no induced subgraph is a cycle of length >= 4."""
    adj = pattern.adjacency()
    nodes = range(pattern.n)
    for size in range(4, pattern.n + 1):
        for subset in itertools.combinations(nodes, size):
            chosen = set(subset)
            degs = [len(adj[v] & chosen) for v in subset]
            if any(d != 2 for d in degs):
                continue
            # connected 2-regular induced subgraph == induced cycle
            seen = {subset[0]}
            frontier = [subset[0]]
            while frontier:
                cur = frontier.pop()
                for nxt in adj[cur] & chosen:
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
            if len(seen) == size:
                return False
    return True


def random_pattern(rng: np.random.Generator, n: int, edge_prob: float) -> SparsityPattern:
    pairs = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob
    ]
    return SparsityPattern.from_edges(n, pairs)


def random_interval_graph(rng: np.random.Generator, n: int) -> SparsityPattern:
    """Intersection graph of random intervals; always chordal."""
    ends = np.sort(rng.random((n, 2)), axis=1)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if ends[i, 0] <= ends[j, 1] and ends[j, 0] <= ends[i, 1]:
                pairs.append((i, j))
    return SparsityPattern.from_edges(n, pairs)


def random_chordal_pattern(rng: np.random.Generator, n: int) -> SparsityPattern:
    """Random chordal graph: extend a sparse random pattern."""
    return chordal_extend(random_pattern(rng, n, float(rng.uniform(0.2, 0.6))))


def psd_completable_oracle(
    partial: np.ndarray, mask: np.ndarray, iters: int = 30000, gap_tol: float = 1e-7
) -> bool:
    """Decide PSD completability by alternating projections.

    ``partial`` holds the specified entries (zero elsewhere); ``mask`` is the
    boolean specified-entry indicator (symmetric, including the diagonal).
    Projects back and forth between the PSD cone and the affine set of
    matrices agreeing with ``partial`` on ``mask``; a vanishing gap between
    the two projections certifies a completion exists, while a gap that
    stalls far above the tolerance certifies none does.
    """
    x = partial.copy()
    gap = np.inf
    last_checkpoint = np.inf
    for it in range(1, iters + 1):
        w, v = np.linalg.eigh(0.5 * (x + x.T))
        y = (v * np.maximum(w, 0.0)) @ v.T
        x = y.copy()
        x[mask] = partial[mask]
        gap = np.linalg.norm(y - x)
        if gap <= gap_tol * 0.01:
            break
        if it % 500 == 0:
            if gap > 100 * gap_tol and gap > 0.99 * last_checkpoint:
                break
            last_checkpoint = gap
    return bool(gap <= gap_tol)


# ---------------------------------------------------------------------------
# dense embedding oracles


def dense_selector_stack(dec, n: int) -> np.ndarray:
    rows = []
    for k in range(dec.p):
        for idx in dec.selector_maps[k]:
            row = np.zeros(n * n)
            row[idx] = 1.0
            rows.append(row)
    return np.array(rows) if rows else np.zeros((0, n * n))


def dense_embedding_matrix(dp: DecomposedProblem) -> np.ndarray:
    """The full skew-symmetric coupling matrix, materialized for small tests."""
    n2, nd, m = dp.n * dp.n, dp.n_d, dp.m
    h = dense_selector_stack(dp.dec, dp.n)
    a = dp.A.toarray()
    total = n2 + nd + m + nd + 1
    q = np.zeros((total, total))
    ix = slice(0, n2)
    is_ = slice(n2, n2 + nd)
    iy = slice(n2 + nd, n2 + nd + m)
    iv = slice(n2 + nd + m, total - 1)
    q[ix, iy] = -a.T
    q[ix, iv] = -h.T
    q[ix, -1] = dp.c
    q[is_, iv] = np.eye(nd)
    q[iy, ix] = a
    q[iy, -1] = -dp.b
    q[iv, ix] = h
    q[iv, is_] = -np.eye(nd)
    q[-1, ix] = -dp.c
    q[-1, iy] = dp.b
    return q


def dense_inner_matrix(dp: DecomposedProblem) -> np.ndarray:
    """The inner skew block system [[I, B'], [-B, I]] for dense solves."""
    m, nd, n2 = dp.m, dp.n_d, dp.n * dp.n
    h = dense_selector_stack(dp.dec, dp.n)
    bhat = np.block(
        [
            [-dp.A.toarray(), np.zeros((m, nd))],
            [-h, np.eye(nd)],
        ]
    )
    return np.block(
        [
            [np.eye(n2 + nd), bhat.T],
            [-bhat, np.eye(m + nd)],
        ]
    )


# ---------------------------------------------------------------------------
# toy problem builders


def pattern_slots(pattern: SparsityPattern) -> list[tuple[int, int]]:
    return sorted(set(pattern.edges) | {(i, i) for i in range(pattern.n)})


def random_pattern_vec(rng: np.random.Generator, pattern: SparsityPattern) -> np.ndarray:
    """Random symmetric matrix supported on the pattern, vectorized."""
    n = pattern.n
    out = np.zeros((n, n))
    for i, j in pattern_slots(pattern):
        v = rng.normal()
        out[i, j] = v
        out[j, i] = v
    return out.reshape(n * n, order="F")


def random_decomposed(
    rng: np.random.Generator, n: int, m: int, edge_prob: float = 0.5
) -> DecomposedProblem:
    """Random decomposed problem over a random chordal-extended pattern."""
    pattern = random_pattern(rng, n, edge_prob)
    ext = chordal_extend(pattern)
    dec = maximal_cliques(ext)
    c = random_pattern_vec(rng, ext)
    a = sp.csr_matrix(np.array([random_pattern_vec(rng, ext) for _ in range(m)]))
    b = rng.normal(size=m)
    return DecomposedProblem(
        n=n, m=m, c=c, A=a, b=b, dec=dec, aggregate=pattern, block_dims=(n,)
    )


def known_solution_decomposed(
    rng: np.random.Generator, n: int, m: int, edge_prob: float = 0.5, rank_drop: int = 2
) -> tuple[DecomposedProblem, float]:
    """Build a decomposed problem with a constructed optimal pair.

    A rank-deficient PSD matrix on the extended pattern plays the primal
    optimum; per-clique rank-one certificates orthogonal to its clique blocks
    play the dual slack. Strong duality then pins the optimal value exactly,
    which is returned alongside the problem.
    """
    pattern = random_pattern(rng, n, edge_prob)
    ext = chordal_extend(pattern)
    dec = maximal_cliques(ext)
    rank = max(1, int(dec.sizes.min()) - rank_drop)
    basis = rng.normal(size=(n, rank))
    gram = basis @ basis.T
    x_star = gram.reshape(n * n, order="F")

    v_parts = []
    for k in range(dec.p):
        clique = dec.cliques[k]
        local = basis[clique, :]
        null = np.linalg.svd(local.T)[2][np.linalg.matrix_rank(local.T) :].T
        if null.shape[1] == 0:
            v_parts.append(np.zeros(len(clique) ** 2))
            continue
        w = null @ rng.normal(size=null.shape[1])
        v_parts.append(np.outer(w, w).reshape(-1))
    v_star = np.concatenate(v_parts) if v_parts else np.zeros(0)

    a = sp.csr_matrix(np.array([random_pattern_vec(rng, ext) for _ in range(m)]))
    y_star = rng.normal(size=m)
    b = a @ x_star
    c = a.T @ y_star + dec.scatter(v_star)
    dp = DecomposedProblem(
        n=n, m=m, c=c, A=a, b=b, dec=dec, aggregate=pattern, block_dims=(n,)
    )
    return dp, float(c @ x_star)


def build_sdpa_problem(
    block_dims: list[int],
    b: np.ndarray,
    c_blocks: list[np.ndarray],
    a_blocks: list[list[np.ndarray]],
) -> SdpProblem:
    """Assemble an SdpProblem from dense per-block matrices (file convention)."""
    def to_sym(a: np.ndarray) -> SymMatrix:
        return SymMatrix.from_dense(a)

    return SdpProblem(
        m=len(b),
        block_dims=tuple(block_dims),
        b=np.asarray(b, dtype=float),
        C=tuple(to_sym(cb) for cb in c_blocks),
        A=tuple(tuple(to_sym(ab) for ab in row) for row in a_blocks),
    )
