"""ADMM on the homogeneous self-dual embedding of the decomposed pair.

The embedding stacks a primal-side iterate u = (x, s, y, v, tau) and a
dual-side iterate w = (h, z, r, w, kappa) of equal layout:

    x : length n**2, free          h : zero cone
    s : length n_d, clique PSD     z : clique PSD (dual)
    y : length m, free             r : zero cone
    v : length n_d, free           w : zero cone
    tau, kappa : nonnegative scalars, complementary.

A skew-symmetric operator Q couples them; solutions of w = Q u with u, w in
the respective cones and <u, w> = 0 encode either an optimal primal-dual pair
(tau > 0) or an infeasibility certificate (kappa > 0).

Each iteration performs three steps: an affine projection solving
(I + Q) u_hat = u + w, a blockwise cone projection, and the dual update
w <- w - u_hat + u. The affine step is reduced by block elimination and two
applications of the matrix-inversion lemma to one cached Cholesky solve with
the m x m matrix I + A P^{-1} A', P = I + D/2 diagonal, so no factorization
larger than m x m ever happens; everything else is gathers, scatters and
sparse matrix-vector products.

Sign conventions of reported objectives and infeasibility labels follow the
input file's convention (see :mod:`chordalsdp.sdpa`): internally feasible
rays with c @ x < 0 certify infeasibility of the file's primal, rays with
b @ y > 0 certify infeasibility of the file's dual.
"""

from __future__ import annotations

import dataclasses
import logging
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .decompose import DecomposedProblem, decompose
from .graphs import CliqueDecomposition
from .sdpa import (
    STATUS_DUAL_INFEASIBLE,
    STATUS_MAX_ITERS,
    STATUS_OPTIMAL,
    STATUS_PRIMAL_INFEASIBLE,
    ProblemStats,
    Residuals,
    SdpProblem,
    SolverReport,
    Timing,
)
from .symmat import project_psd_batch

logger = logging.getLogger(__name__)


class FactorizationFailure(RuntimeError):
    """The m x m system could not be factorized (rank-deficient or ill-scaled data)."""


class TauZero(RuntimeError):
    """Raised by :func:`residuals` when the scaling variable tau is numerically zero."""


@dataclass
class SolverSettings:
    """Termination and algorithm parameters.

    ``alpha`` in [1, 2) over-relaxes the affine step (1.0 reproduces the
    plain iteration). ``normalize`` rescales the objective and right-hand
    vectors to unit norm before iterating; residual tolerances then apply to
    the normalized problem, the convention of the solver family this method
    belongs to, while objectives, solution entries, and infeasibility
    certificates are always stated for the original data. ``threads`` caps
    the parallelism of the per-clique cone projections; 1 keeps them
    sequential and fully deterministic.
    """

    tol: float = 1e-4
    max_iters: int = 2000
    alpha: float = 1.6
    infeas_tau_tol: float = 1e-9
    infeas_kappa_tol: float = 1e-6
    check_interval: int = 20
    normalize: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not 1.0 <= self.alpha < 2.0:
            raise ValueError("alpha must lie in [1, 2)")
        if self.check_interval < 1:
            raise ValueError("check_interval must be at least 1")


@dataclass(frozen=True, eq=False)
class VariableLayout:
    """Index arithmetic for the stacked iterates plus grouped clique blocks."""

    n: int
    m: int
    n_d: int
    dec: CliqueDecomposition

    @property
    def n2(self) -> int:
        return self.n * self.n

    @property
    def total(self) -> int:
        return self.n2 + 2 * self.n_d + self.m + 1

    @property
    def sl_x(self) -> slice:
        return slice(0, self.n2)

    @property
    def sl_s(self) -> slice:
        return slice(self.n2, self.n2 + self.n_d)

    @property
    def sl_y(self) -> slice:
        return slice(self.n2 + self.n_d, self.n2 + self.n_d + self.m)

    @property
    def sl_v(self) -> slice:
        return slice(self.n2 + self.n_d + self.m, self.total - 1)

    @property
    def idx_tau(self) -> int:
        return self.total - 1

    def size_groups(self) -> list[tuple[int, np.ndarray]]:
        """Clique blocks grouped by size: (size, indices into the s segment)."""
        cached = getattr(self, "_groups", None)
        if cached is None:
            groups = []
            sizes = self.dec.sizes
            for size in np.unique(sizes):
                ids = np.nonzero(sizes == size)[0]
                base = self.dec.offsets[ids]
                idx = base[:, None] + np.arange(size * size)[None, :]
                groups.append((int(size), idx))
            object.__setattr__(self, "_groups", groups)
            cached = groups
        return cached


@dataclass(frozen=True, eq=False)
class QOperator:
    """Implicit action of the skew-symmetric embedding matrix."""

    dp: DecomposedProblem
    layout: VariableLayout

    def apply(self, u: np.ndarray) -> np.ndarray:
        lay, dp = self.layout, self.dp
        x = u[lay.sl_x]
        s = u[lay.sl_s]
        y = u[lay.sl_y]
        v = u[lay.sl_v]
        tau = u[lay.idx_tau]
        out = np.empty_like(u)
        out[lay.sl_x] = -(dp.A.T @ y) - dp.dec.scatter(v) + tau * dp.c
        out[lay.sl_s] = v
        out[lay.sl_y] = dp.A @ x - tau * dp.b
        out[lay.sl_v] = dp.dec.gather(x) - s
        out[lay.idx_tau] = -(dp.c @ x) + dp.b @ y
        return out


def build_hsde(dp: DecomposedProblem) -> tuple[QOperator, VariableLayout]:
    """Assemble the implicit embedding operator and the cone layout."""
    layout = VariableLayout(n=dp.n, m=dp.m, n_d=dp.n_d, dec=dp.dec)
    return QOperator(dp, layout), layout


@dataclass(frozen=True, eq=False)
class KktCache:
    """Cached objects for the affine projection.

    ``factored_dims`` records the dimension of every matrix factorization
    performed during setup; the block-elimination pipeline guarantees it
    contains exactly one entry, m.
    """

    dp: DecomposedProblem
    AT: sp.spmatrix
    p_inv: np.ndarray
    schur: tuple
    zeta: np.ndarray
    minv_zeta: np.ndarray
    zeta_scale: float
    factored_dims: tuple[int, ...]


def _solve_inner_parts(
    dp: DecomposedProblem,
    AT: sp.spmatrix,
    p_inv: np.ndarray,
    schur: tuple,
    w1: np.ndarray,
    w2: np.ndarray,
    out1: np.ndarray | None = None,
    out2: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    n2, m = dp.n * dp.n, dp.m
    dec = dp.dec
    wa, wb = w1[:n2], w1[n2:]
    wy, wv = w2[:m], w2[m:]
    if out1 is None:
        out1 = np.empty(n2 + dp.n_d)
    if out2 is None:
        out2 = np.empty(m + dp.n_d)
    # Right-hand side after eliminating the second block row.
    gb = wb - wv
    r = dec.scatter(gb)
    r *= 0.5
    r += dec.scatter(wv)
    r += AT @ wy
    r += wa
    # Diagonal-plus-low-rank solve of (I + D/2 + A'A) ua = r; r doubles as
    # the scratch for the rank-correction term.
    t = r
    t *= p_inv
    corr = AT @ scipy.linalg.cho_solve(schur, dp.A @ t, check_finite=False)
    corr *= p_inv
    ua = out1[:n2]
    np.subtract(t, corr, out=ua)
    hua = dec.gather(ua)
    ub = out1[n2:]
    np.add(gb, hua, out=ub)
    ub *= 0.5
    uy = out2[:m]
    np.subtract(wy, dp.A @ ua, out=uy)
    uv = out2[m:]
    np.subtract(ub, hua, out=uv)
    uv += wv
    return out1, out2


def setup_cache(dp: DecomposedProblem) -> KktCache:
    """Factor the m x m reduced system and cache the data-dependent vectors."""
    p_inv = 1.0 / (1.0 + 0.5 * dp.D)
    scaled = dp.A.multiply(p_inv).tocsr()
    schur_mat = (scaled @ dp.A.T).toarray()
    schur_mat[np.diag_indices_from(schur_mat)] += 1.0
    try:
        schur = scipy.linalg.cho_factor(schur_mat, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise FactorizationFailure(
            f"Cholesky of the {dp.m} x {dp.m} reduced system failed: {exc}"
        ) from exc

    # CSC keeps the transpose product O(nnz + m) instead of O(n**2).
    AT = dp.A.T.tocsc()
    n2, n_d, m = dp.n * dp.n, dp.n_d, dp.m
    zeta = np.concatenate([dp.c, np.zeros(n_d), -dp.b, np.zeros(n_d)])
    z1, z2 = _solve_inner_parts(
        dp, AT, p_inv, schur, zeta[: n2 + n_d], zeta[n2 + n_d :]
    )
    minv_zeta = np.concatenate([z1, z2])
    zeta_scale = 1.0 + zeta @ minv_zeta
    if not zeta_scale > 0:
        raise FactorizationFailure(
            f"rank-one update scale {zeta_scale} is not positive; data is ill-scaled"
        )
    return KktCache(
        dp=dp,
        AT=AT,
        p_inv=p_inv,
        schur=schur,
        zeta=zeta,
        minv_zeta=minv_zeta,
        zeta_scale=zeta_scale,
        factored_dims=(dp.m,),
    )


def solve_inner(cache: KktCache, w1: np.ndarray, w2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve the inner skew block system [[I, B'], [-B, I]] (u1, u2) = (w1, w2).

    ``w1`` spans the (x, s) columns, ``w2`` the (y, v) columns. The solve is
    exact up to factorization round-off: eliminations reduce it to one
    backsolve with the cached m x m Cholesky factor.
    """
    return _solve_inner_parts(cache.dp, cache.AT, cache.p_inv, cache.schur, w1, w2)


def affine_project(cache: KktCache, w: np.ndarray) -> np.ndarray:
    """Solve (I + Q) u_hat = w via the cached block eliminations."""
    dp = cache.dp
    n12a = dp.n * dp.n + dp.n_d
    w12, w3 = w[:-1], w[-1]
    rho = w12 - w3 * cache.zeta
    out = np.empty(w.shape[0])
    u12 = out[:-1]
    _solve_inner_parts(
        dp,
        cache.AT,
        cache.p_inv,
        cache.schur,
        rho[:n12a],
        rho[n12a:],
        out1=u12[:n12a],
        out2=u12[n12a:],
    )
    # Rank-one correction of the cached inverse, then the scalar row.
    shift = (cache.zeta @ u12) / cache.zeta_scale
    u12 -= shift * cache.minv_zeta
    out[-1] = w3 + cache.zeta @ u12
    return out


def project_cone(
    u_raw: np.ndarray, layout: VariableLayout, threads: int = 1, copy: bool = True
) -> np.ndarray:
    """Blockwise projection onto the cone of the primal-side iterate.

    x, y, v pass through (free); each clique block of s is projected onto
    its PSD cone; tau is clamped at zero. Distinct clique blocks are
    independent, so the grouped projections may run concurrently; the result
    does not depend on ``threads``. ``copy=False`` projects in place.
    """
    out = u_raw.copy() if copy else u_raw
    s = out[layout.sl_s]
    groups = layout.size_groups()

    def project_group(item):
        size, idx = item
        if size == 1:
            s[idx] = np.maximum(s[idx], 0.0)
            return
        count = idx.shape[0]
        blocks = s[idx].reshape(count, size, size)
        s[idx] = project_psd_batch(blocks).reshape(count, size * size)

    if threads > 1 and len(groups) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(project_group, groups))
    else:
        for item in groups:
            project_group(item)

    tau = out[layout.idx_tau]
    out[layout.idx_tau] = tau if tau > 0.0 else 0.0
    return out


@dataclass
class HsdeState:
    """One ADMM iterate: the primal-side and dual-side stacked vectors."""

    u: np.ndarray
    w_dual: np.ndarray


def initial_state(layout: VariableLayout) -> HsdeState:
    """Zero start with unit tau and kappa, the standard nontrivial seed."""
    u = np.zeros(layout.total)
    w = np.zeros(layout.total)
    u[layout.idx_tau] = 1.0
    w[layout.idx_tau] = 1.0
    return HsdeState(u, w)


def iterate(
    state: HsdeState,
    cache: KktCache,
    layout: VariableLayout,
    settings: SolverSettings,
) -> HsdeState:
    """One sweep: affine projection, cone projection, dual update.

    The dual update w - u_hat + u_new cancels exactly on the free blocks
    (the projection passes them through), keeping the dual iterate in its
    zero cones to the last bit.
    """
    u_hat = affine_project(cache, state.u + state.w_dual)
    if settings.alpha != 1.0:
        u_hat *= settings.alpha
        u_hat += (1.0 - settings.alpha) * state.u
    arg = u_hat - state.w_dual
    u_new = project_cone(arg, layout, settings.threads, copy=False)
    w_new = state.w_dual - u_hat
    w_new += u_new
    return HsdeState(u_new, w_new)


def residuals(
    state: HsdeState, dp: DecomposedProblem, tau_tol: float = 1e-9
) -> Residuals:
    """Scaled primal/dual/gap residuals of the tau-normalized candidate pair.

    Raises
    ------
    TauZero
        If tau is at or below ``tau_tol``; the caller should consult the
        certificate branch instead of dividing by tau.
    """
    layout = VariableLayout(n=dp.n, m=dp.m, n_d=dp.n_d, dec=dp.dec)
    tau = state.u[layout.idx_tau]
    if tau <= tau_tol:
        raise TauZero(f"tau = {tau} is numerically zero")
    xt = state.u[layout.sl_x] / tau
    st = state.u[layout.sl_s] / tau
    yt = state.u[layout.sl_y] / tau
    vt = state.u[layout.sl_v] / tau
    pres_affine = np.linalg.norm(dp.A @ xt - dp.b) / (1.0 + np.linalg.norm(dp.b))
    pres_consensus = np.linalg.norm(dp.dec.gather(xt) - st) / (
        1.0 + np.linalg.norm(st)
    )
    dres = np.linalg.norm(dp.A.T @ yt + dp.dec.scatter(vt) - dp.c) / (
        1.0 + np.linalg.norm(dp.c)
    )
    ctx = dp.c @ xt
    bty = dp.b @ yt
    gap = abs(ctx - bty) / (1.0 + abs(ctx) + abs(bty))
    return Residuals(
        primal=float(max(pres_affine, pres_consensus)), dual=float(dres), gap=float(gap)
    )


def _clique_min_eig(dec: CliqueDecomposition, s: np.ndarray) -> float:
    """Smallest eigenvalue over all clique blocks of a stacked s-style vector."""
    worst = np.inf
    for k in range(dec.p):
        size = int(dec.sizes[k])
        block = dec.block(s, k).reshape(size, size)
        sym = 0.5 * (block + block.T)
        worst = min(worst, float(np.linalg.eigvalsh(sym)[0]) if size > 1 else float(sym[0, 0]))
    return worst


def _pattern_entries(dp: DecomposedProblem, flat: np.ndarray) -> list[list]:
    """Collect [block, i, j, value] rows (1-based, block-local) on the aggregate pattern."""
    n = dp.n
    rows = []
    diag = [(i, i) for i in range(n)]
    for gi, gj in sorted(set(dp.aggregate.edges) | set(diag)):
        blk, li = dp.block_local(gi)
        _, lj = dp.block_local(gj)
        rows.append([blk + 1, li + 1, lj + 1, float(flat[gj * n + gi])])
    return rows


def _try_certificates(
    state: HsdeState, dp: DecomposedProblem, layout: VariableLayout, tol: float
) -> tuple[str, dict] | None:
    """Validate infeasibility certificates on the current (unscaled) iterate.

    Returns a (status, certificate) pair when a normalized ray passes its
    quality checks, preferring the dual-side ray when both qualify. Labels
    are in the input file's convention.
    """
    u = state.u
    x = u[layout.sl_x]
    s = u[layout.sl_s]
    y = u[layout.sl_y]
    v = u[layout.sl_v]
    by = dp.b @ y
    cx = dp.c @ x

    if by > 0:
        yt = y / by
        vt = v / by
        resid = float(np.linalg.norm(dp.A.T @ yt + dp.dec.scatter(vt)))
        min_eig = _clique_min_eig(dp.dec, vt)
        if resid <= tol and min_eig >= -tol:
            certificate = {
                "ray": "dual",
                "y": [float(t) for t in yt],
                "slack_entries": _pattern_entries(dp, dp.dec.scatter(vt)),
                "b_dot_y": 1.0,
                "residual": resid,
                "min_block_eigenvalue": min_eig,
            }
            return STATUS_DUAL_INFEASIBLE, certificate

    if cx < 0:
        scale = -cx
        xt = x / scale
        st = s / scale
        resid = float(np.linalg.norm(dp.A @ xt))
        consensus = float(np.linalg.norm(dp.dec.gather(xt) - st))
        min_eig = _clique_min_eig(dp.dec, dp.dec.gather(xt))
        if resid <= tol and consensus <= tol and min_eig >= -tol:
            certificate = {
                "ray": "primal",
                "ray_entries": _pattern_entries(dp, xt),
                "c_dot_x": -1.0,
                "residual": resid,
                "min_block_eigenvalue": min_eig,
            }
            return STATUS_PRIMAL_INFEASIBLE, certificate

    return None


def _problem_stats(dp: DecomposedProblem) -> ProblemStats:
    sizes = dp.dec.sizes
    return ProblemStats(
        n=dp.n,
        m=dp.m,
        blocks=[int(d) for d in dp.block_dims],
        p=dp.p,
        clique_max=int(sizes.max()) if len(sizes) else 0,
        clique_min=int(sizes.min()) if len(sizes) else 0,
        n_d=dp.n_d,
    )


def _classify(
    state: HsdeState,
    dp_int: DecomposedProblem,
    dp_orig: DecomposedProblem,
    sigma_c: float,
    sigma_b: float,
    settings: SolverSettings,
    iterations: int,
    timing: Timing,
    layout: VariableLayout,
) -> SolverReport:
    """Turn the final iterate into a report.

    Termination residuals are measured on the problem actually iterated
    (``dp_int``, normalized when enabled); objectives, solution entries and
    certificates are always stated for the original data ``dp_orig``.
    """
    stats = _problem_stats(dp_orig)
    sign = dp_orig.objective_sign
    tau = state.u[layout.idx_tau]
    kappa = state.w_dual[layout.idx_tau]
    candidate = _unscale_state(state, layout, sigma_c, sigma_b)

    if tau > settings.infeas_tau_tol:
        res = residuals(state, dp_int, settings.infeas_tau_tol)
        u = candidate.u
        xt = u[layout.sl_x] / tau
        yt = u[layout.sl_y] / tau
        vt = u[layout.sl_v] / tau
        obj_primal = sign * float(dp_orig.c @ xt)
        obj_dual = sign * float(dp_orig.b @ yt)
        if res.max() <= settings.tol:
            solution = {
                "x_entries": _pattern_entries(dp_orig, xt),
                "y": [float(t) for t in yt],
                "z_entries": _pattern_entries(dp_orig, dp_orig.dec.scatter(vt)),
            }
            return SolverReport(
                status=STATUS_OPTIMAL,
                objective_primal=obj_primal,
                objective_dual=obj_dual,
                iterations=iterations,
                residuals=res,
                timing=timing,
                problem=stats,
                tol=settings.tol,
                solution=solution,
            )
        return SolverReport(
            status=STATUS_MAX_ITERS,
            objective_primal=obj_primal,
            objective_dual=obj_dual,
            iterations=iterations,
            residuals=res,
            timing=timing,
            problem=stats,
            tol=settings.tol,
        )

    if kappa > settings.infeas_kappa_tol:
        found = _try_certificates(candidate, dp_orig, layout, settings.tol)
        if found is not None:
            status, certificate = found
            return SolverReport(
                status=status,
                objective_primal=None,
                objective_dual=None,
                iterations=iterations,
                residuals=None,
                timing=timing,
                problem=stats,
                tol=settings.tol,
                certificate=certificate,
            )

    return SolverReport(
        status=STATUS_MAX_ITERS,
        objective_primal=None,
        objective_dual=None,
        iterations=iterations,
        residuals=None,
        timing=timing,
        problem=stats,
        tol=settings.tol,
    )


def recover(
    state: HsdeState,
    dp: DecomposedProblem,
    settings: SolverSettings,
    iterations: int,
    timing: Timing,
) -> SolverReport:
    """Classify a final iterate of ``dp`` into a solution or certificate report."""
    layout = VariableLayout(n=dp.n, m=dp.m, n_d=dp.n_d, dec=dp.dec)
    return _classify(state, dp, dp, 1.0, 1.0, settings, iterations, timing, layout)


@dataclass
class IterationInfo:
    """Snapshot handed to the iteration callback at every residual check."""

    iteration: int
    pres: float
    dres: float
    gap: float
    tau: float
    kappa: float
    state: HsdeState
    layout: VariableLayout


class _MeritTracker:
    """Warns when the fixed-point residual rises across 50-iteration windows."""

    window = 50

    def __init__(self):
        self._minima: dict[int, float] = {}

    def record(self, iteration: int, merit: float) -> None:
        bucket = (iteration - 1) // self.window
        prev = self._minima.get(bucket, np.inf)
        self._minima[bucket] = min(prev, merit)
        if bucket >= 2:
            older, newer = self._minima.get(bucket - 2), self._minima.get(bucket - 1)
            if older is not None and newer is not None and newer > older * (1 + 1e-9):
                logger.warning(
                    "fixed-point residual rose across windows %d -> %d (%.3e -> %.3e)",
                    bucket - 2,
                    bucket - 1,
                    older,
                    newer,
                )
                self._minima.pop(bucket - 2, None)


def _normalization_scales(dp: DecomposedProblem, enabled: bool) -> tuple[float, float]:
    """Scalars bringing c and b to unit norm (identity when disabled or zero)."""
    if not enabled:
        return 1.0, 1.0
    norm_c = float(np.linalg.norm(dp.c))
    norm_b = float(np.linalg.norm(dp.b))
    return (1.0 / norm_c if norm_c > 0 else 1.0, 1.0 / norm_b if norm_b > 0 else 1.0)


def _unscale_state(
    state: HsdeState, layout: VariableLayout, sigma_c: float, sigma_b: float
) -> HsdeState:
    """Map an iterate of the normalized problem back to original data units.

    Primal-side blocks (x, s) scale with the right-hand vector, dual-side
    blocks (y, v) with the objective; tau and kappa are scale-free. The
    positive scalings preserve cone membership, so the result feeds the same
    residual, certificate and recovery code as an unnormalized iterate.
    """
    if sigma_c == 1.0 and sigma_b == 1.0:
        return state
    u = state.u.copy()
    w = state.w_dual.copy()
    for vec_ in (u, w):
        vec_[layout.sl_x] /= sigma_b
        vec_[layout.sl_s] /= sigma_b
        vec_[layout.sl_y] /= sigma_c
        vec_[layout.sl_v] /= sigma_c
    return HsdeState(u, w)


def solve_decomposed(
    dp: DecomposedProblem,
    settings: SolverSettings | None = None,
    iteration_callback: Callable[[IterationInfo], None] | None = None,
    setup_elapsed: float = 0.0,
) -> SolverReport:
    """Run the ADMM loop on an already-decomposed problem."""
    settings = settings or SolverSettings()
    t_setup_start = time.perf_counter()
    sigma_c, sigma_b = _normalization_scales(dp, settings.normalize)
    dp_int = (
        dp
        if sigma_c == 1.0 and sigma_b == 1.0
        else dataclasses.replace(dp, c=sigma_c * dp.c, b=sigma_b * dp.b)
    )
    _, layout = build_hsde(dp_int)
    cache = setup_cache(dp_int)
    state = initial_state(layout)
    setup_s = setup_elapsed + (time.perf_counter() - t_setup_start)

    tracker = _MeritTracker()
    t_loop_start = time.perf_counter()
    iterations = 0
    for k in range(1, settings.max_iters + 1):
        prev = state
        state = iterate(state, cache, layout, settings)
        iterations = k

        if k % settings.check_interval and k != settings.max_iters:
            continue

        merit = float(
            np.linalg.norm(state.u - prev.u) + np.linalg.norm(state.w_dual - prev.w_dual)
        )
        tracker.record(k, merit)
        tau = state.u[layout.idx_tau]
        kappa = state.w_dual[layout.idx_tau]
        if tau > settings.infeas_tau_tol:
            res = residuals(state, dp_int, settings.infeas_tau_tol)
            if iteration_callback is not None:
                iteration_callback(
                    IterationInfo(
                        iteration=k,
                        pres=res.primal,
                        dres=res.dual,
                        gap=res.gap,
                        tau=float(tau),
                        kappa=float(kappa),
                        state=state,
                        layout=layout,
                    )
                )
            if res.max() <= settings.tol:
                break
        else:
            if iteration_callback is not None:
                iteration_callback(
                    IterationInfo(
                        iteration=k,
                        pres=float("inf"),
                        dres=float("inf"),
                        gap=float("inf"),
                        tau=float(tau),
                        kappa=float(kappa),
                        state=state,
                        layout=layout,
                    )
                )
            if kappa > settings.infeas_kappa_tol:
                candidate = _unscale_state(state, layout, sigma_c, sigma_b)
                if _try_certificates(candidate, dp, layout, settings.tol) is not None:
                    break

    loop_s = time.perf_counter() - t_loop_start
    timing = Timing(
        setup_s=setup_s,
        iterations_s=loop_s,
        total_s=setup_s + loop_s,
        per_iteration_s=loop_s / max(iterations, 1),
    )
    return _classify(
        state, dp_int, dp, sigma_c, sigma_b, settings, iterations, timing, layout
    )


def solve(
    problem: SdpProblem,
    settings: SolverSettings | None = None,
    split_cones: bool = True,
    iteration_callback: Callable[[IterationInfo], None] | None = None,
) -> SolverReport:
    """Decompose, embed, iterate, and classify a parsed problem."""
    t0 = time.perf_counter()
    dp = decompose(problem, split_cones=split_cones)
    return solve_decomposed(
        dp,
        settings=settings,
        iteration_callback=iteration_callback,
        setup_elapsed=time.perf_counter() - t0,
    )
