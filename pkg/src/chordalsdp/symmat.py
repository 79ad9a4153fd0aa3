"""Symmetric matrix storage, column-stacking vectorization, and PSD projection.

Matrices are indexed 0-based throughout. A symmetric matrix of order n is
vectorized into a dense length-n**2 vector by stacking its columns, so entry
(i, j) lands at flat position j*n + i. Symmetry makes the layout agree with
row stacking, which keeps inner products exact: <A, B> == vec(A) @ vec(B).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class NonSquareLength(ValueError):
    """Raised when a vector cannot be reshaped into a square matrix."""


class EigenFailure(RuntimeError):
    """Raised when the symmetric eigensolver does not converge."""


@dataclass(frozen=True)
class SymMatrix:
    """Sparse symmetric matrix stored as upper-triangle coordinates.

    Parameters
    ----------
    dim : int
        Matrix order n (positive).
    entries : tuple of (row, col, value)
        Coordinates with row <= col, 0-based, no duplicates. Reads at (i, j)
        and (j, i) return the same value; missing coordinates read as zero.
    """

    dim: int
    entries: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"matrix order must be positive, got {self.dim}")
        seen = set()
        for i, j, _v in self.entries:
            if not (0 <= i <= j < self.dim):
                raise ValueError(f"entry ({i}, {j}) outside upper triangle of order {self.dim}")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry at ({i}, {j})")
            seen.add((i, j))

    @classmethod
    def from_dense(cls, a: np.ndarray) -> "SymMatrix":
        """Build from a dense symmetric array, keeping only nonzero entries."""
        a = np.asarray(a, dtype=float)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError(f"expected a square array, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("array is not symmetric")
        ii, jj = np.nonzero(np.triu(a))
        return cls(n, tuple((int(i), int(j), float(a[i, j])) for i, j in zip(ii, jj)))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        for i, j, v in self.entries:
            out[i, j] = v
            out[j, i] = v
        return out

    def get(self, i: int, j: int) -> float:
        """Read entry (i, j); symmetric and zero-filled."""
        if i > j:
            i, j = j, i
        for r, c, v in self.entries:
            if r == i and c == j:
                return v
        return 0.0


@dataclass(frozen=True, eq=False)
class VecMatrix:
    """Column-stacked dense vectorization of an order-n symmetric matrix."""

    dim: int
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != (self.dim * self.dim,):
            raise ValueError(
                f"data length {self.data.shape} does not match order {self.dim}"
            )

    def to_dense(self) -> np.ndarray:
        """Reshape to the (n, n) matrix; columns are contiguous runs of data."""
        return self.data.reshape(self.dim, self.dim, order="F")


class MatResult(NamedTuple):
    matrix: "SymMatrix"
    symmetrized: bool


def vec(m: SymMatrix) -> VecMatrix:
    """Column-stack a symmetric matrix into a length n**2 vector."""
    n = m.dim
    data = np.zeros(n * n)
    for i, j, v in m.entries:
        data[j * n + i] = v
        data[i * n + j] = v
    return VecMatrix(n, data)


def _square_side(length: int) -> int:
    n = int(round(np.sqrt(length)))
    if n * n != length:
        raise NonSquareLength(f"vector length {length} is not a perfect square")
    return n


def mat(x: VecMatrix | np.ndarray) -> MatResult:
    """Invert :func:`vec`, symmetrizing via (X + X.T)/2 when needed.

    Returns the matrix together with a flag that is True when the input was
    not exactly symmetric and the average was taken.
    """
    data = x.data if isinstance(x, VecMatrix) else np.asarray(x, dtype=float)
    n = _square_side(data.shape[0])
    full = data.reshape(n, n, order="F")
    asymmetric = not np.array_equal(full, full.T)
    if asymmetric:
        full = 0.5 * (full + full.T)
    return MatResult(SymMatrix.from_dense(full), asymmetric)


def project_psd_dense(a: np.ndarray) -> np.ndarray:
    """Euclidean projection of a dense square array onto the PSD cone.

    The input is symmetrized first; negative eigenvalues are clamped to
    exactly zero (tolerance policy belongs to termination, not projection).
    """
    sym = 0.5 * (a + a.T)
    try:
        w, q = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigenFailure("eigendecomposition produced non-finite eigenvalues")
    np.maximum(w, 0.0, out=w)
    return (q * w) @ q.T


def project_psd_batch(blocks: np.ndarray) -> np.ndarray:
    """Project a stack of square blocks (k, c, c) onto the PSD cone at once."""
    if blocks.shape[-1] == 1:
        return np.maximum(blocks, 0.0)
    sym = 0.5 * (blocks + np.swapaxes(blocks, -1, -2))
    try:
        w, q = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"batched eigendecomposition failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigenFailure("batched eigendecomposition produced non-finite eigenvalues")
    np.maximum(w, 0.0, out=w)
    return np.einsum("kij,kj,klj->kil", q, w, q)


def project_psd(x: VecMatrix | np.ndarray) -> VecMatrix:
    """Project a vectorized matrix onto the PSD cone (symmetrize, clamp, rebuild)."""
    data = x.data if isinstance(x, VecMatrix) else np.asarray(x, dtype=float)
    n = _square_side(data.shape[0])
    proj = project_psd_dense(data.reshape(n, n, order="F"))
    return VecMatrix(n, proj.reshape(n * n, order="F"))
