"""SDPA sparse format (.dat-s) parsing and solver report serialization.

A .dat-s file poses the pair

    minimize    c'u                 maximize    tr(F0 Y)
    subject to  sum_i u_i Fi - F0   subject to  tr(Fi Y) = c_i,  i = 1..m,
                is PSD,                         Y PSD,

and SDPLIB's published optimal values, as well as its labelling of the
infeasible instances, refer to this pair. The parser stores the matrices
verbatim: ``C`` holds F0, ``A[i]`` holds F(i+1), ``b`` holds the length-m
vector. The solver maximizes tr(F0 Y) by minimizing its negation internally
(see :mod:`chordalsdp.decompose`); reported objectives and infeasibility
labels are always in the file's convention, so theta1 reports 23.00.

Entry lines are ``matno blkno i j value`` with 1-based indices and i <= j
(entries with i > j are normalized). Explicit zero values are kept: they are
structural and enlarge the aggregate sparsity pattern. Negative block sizes
declare diagonal blocks, which may only carry diagonal entries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .symmat import SymMatrix

STATUS_OPTIMAL = "Optimal"
STATUS_PRIMAL_INFEASIBLE = "PrimalInfeasible"
STATUS_DUAL_INFEASIBLE = "DualInfeasible"
STATUS_MAX_ITERS = "MaxItersReached"
STATUSES = (
    STATUS_OPTIMAL,
    STATUS_PRIMAL_INFEASIBLE,
    STATUS_DUAL_INFEASIBLE,
    STATUS_MAX_ITERS,
)


class ParseError(ValueError):
    """Malformed SDPA input; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateEntry(ParseError):
    """The same (matno, blkno, i, j) coordinate appeared twice."""


@dataclass(frozen=True)
class SdpProblem:
    """Parsed SDPA problem, matrices stored verbatim in the file's convention.

    ``block_dims`` keeps the signed sizes from the file: positive for PSD
    blocks, negative magnitude for diagonal blocks. ``C[blk]`` and
    ``A[i][blk]`` are per-block symmetric matrices of order ``abs(dim)``.
    """

    m: int
    block_dims: tuple[int, ...]
    b: np.ndarray
    C: tuple[SymMatrix, ...]
    A: tuple[tuple[SymMatrix, ...], ...]

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(abs(d) for d in self.block_dims)

    @property
    def block_offsets(self) -> tuple[int, ...]:
        offs = [0]
        for d in self.block_sizes:
            offs.append(offs[-1] + d)
        return tuple(offs)

    @property
    def n_total(self) -> int:
        return sum(self.block_sizes)

    def entry_count(self) -> int:
        count = sum(len(blk.entries) for blk in self.C)
        for mats in self.A:
            count += sum(len(blk.entries) for blk in mats)
        return count


def _tokens(line: str) -> list[str]:
    for ch in ",{}()":
        line = line.replace(ch, " ")
    return line.split()


def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected integer {what}, got {tok!r}") from None


def _parse_float(tok: str, lineno: int, what: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(lineno, f"expected number {what}, got {tok!r}") from None


def parse_sdpa(source: str | bytes | Path | IO) -> SdpProblem:
    """Parse SDPA sparse format from text, bytes, a path, or an open stream.

    Raises
    ------
    ParseError
        Malformed token, missing data, or an out-of-range block/index,
        reported with its line number.
    DuplicateEntry
        The same matrix coordinate given twice.
    """
    if isinstance(source, Path):
        text = source.read_text()
    elif isinstance(source, bytes):
        text = source.decode()
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode() if isinstance(raw, bytes) else raw

    lines = text.splitlines()
    pos = 0
    total = len(lines)

    def next_data_line(allow_comment: bool) -> tuple[int, str]:
        nonlocal pos
        while pos < total:
            lineno = pos + 1
            line = lines[pos]
            pos += 1
            stripped = line.strip()
            if not stripped:
                continue
            if stripped[0] in '"*':
                if allow_comment:
                    continue
                raise ParseError(lineno, "comment lines are only allowed before the header")
            return lineno, stripped
        raise ParseError(total, "unexpected end of input")

    lineno, line = next_data_line(allow_comment=True)
    m = _parse_int(_tokens(line)[0], lineno, "constraint count")
    if m < 1:
        raise ParseError(lineno, f"constraint count must be positive, got {m}")

    lineno, line = next_data_line(allow_comment=False)
    nblocks = _parse_int(_tokens(line)[0], lineno, "block count")
    if nblocks < 1:
        raise ParseError(lineno, f"block count must be positive, got {nblocks}")

    block_dims: list[int] = []
    while len(block_dims) < nblocks:
        lineno, line = next_data_line(allow_comment=False)
        for tok in _tokens(line):
            if len(block_dims) == nblocks:
                break
            dim = _parse_int(tok, lineno, "block size")
            if dim == 0:
                raise ParseError(lineno, "block size must be nonzero")
            block_dims.append(dim)

    b_vals: list[float] = []
    while len(b_vals) < m:
        lineno, line = next_data_line(allow_comment=False)
        for tok in _tokens(line):
            if len(b_vals) == m:
                break
            b_vals.append(_parse_float(tok, lineno, "right-hand side entry"))

    sizes = [abs(d) for d in block_dims]
    entries: dict[tuple[int, int], dict[tuple[int, int], float]] = {}
    seen: set[tuple[int, int, int, int]] = set()
    while pos < total:
        lineno = pos + 1
        stripped = lines[pos].strip()
        pos += 1
        if not stripped:
            continue
        if stripped[0] in '"*':
            raise ParseError(lineno, "comment lines are only allowed before the header")
        toks = stripped.split()
        if len(toks) != 5:
            raise ParseError(lineno, f"entry line needs 5 fields, got {len(toks)}")
        matno = _parse_int(toks[0], lineno, "matrix number")
        blkno = _parse_int(toks[1], lineno, "block number")
        i = _parse_int(toks[2], lineno, "row index")
        j = _parse_int(toks[3], lineno, "column index")
        value = _parse_float(toks[4], lineno, "entry value")
        if not 0 <= matno <= m:
            raise ParseError(lineno, f"matrix number {matno} outside [0, {m}]")
        if not 1 <= blkno <= nblocks:
            raise ParseError(lineno, f"block number {blkno} outside [1, {nblocks}]")
        size = sizes[blkno - 1]
        if i > j:
            i, j = j, i
        if not 1 <= i <= j <= size:
            raise ParseError(lineno, f"entry ({i}, {j}) outside block of size {size}")
        if block_dims[blkno - 1] < 0 and i != j:
            raise ParseError(lineno, f"off-diagonal entry ({i}, {j}) in diagonal block {blkno}")
        key = (matno, blkno, i, j)
        if key in seen:
            raise DuplicateEntry(lineno, f"duplicate entry for matrix {matno}, block {blkno}, ({i}, {j})")
        seen.add(key)
        entries.setdefault((matno, blkno), {})[(i - 1, j - 1)] = value

    def block_matrix(matno: int, blk: int) -> SymMatrix:
        coords = entries.get((matno, blk + 1), {})
        return SymMatrix(sizes[blk], tuple((i, j, v) for (i, j), v in sorted(coords.items())))

    C = tuple(block_matrix(0, blk) for blk in range(nblocks))
    A = tuple(
        tuple(block_matrix(i, blk) for blk in range(nblocks)) for i in range(1, m + 1)
    )
    return SdpProblem(
        m=m,
        block_dims=tuple(block_dims),
        b=np.array(b_vals, dtype=float),
        C=C,
        A=A,
    )


@dataclass
class Residuals:
    primal: float
    dual: float
    gap: float

    def max(self) -> float:
        return max(self.primal, self.dual, self.gap)


@dataclass
class Timing:
    setup_s: float
    iterations_s: float
    total_s: float
    per_iteration_s: float


@dataclass
class ProblemStats:
    n: int
    m: int
    blocks: list[int]
    p: int
    clique_max: int
    clique_min: int
    n_d: int


@dataclass
class SolverReport:
    """Outcome of a solve, JSON-serializable and convention-stable.

    ``objective_primal``/``objective_dual`` are in the input file's
    convention (tr(F0 Y) and its equality-constrained bound). ``solution``
    carries pattern-restricted primal entries, the dual vector, and the
    dual-slack entries; ``certificate`` carries the normalized infeasibility
    certificate. Entry lists use ``[block, i, j, value]`` with 1-based
    indices, matching the input format.
    """

    status: str
    objective_primal: float | None
    objective_dual: float | None
    iterations: int
    residuals: Residuals | None
    timing: Timing
    problem: ProblemStats
    tol: float
    solution: dict | None = None
    certificate: dict | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == STATUS_OPTIMAL:
            if self.residuals is None or self.residuals.max() > self.tol:
                raise ValueError("Optimal status requires residuals within tolerance")


def emit_report(report: SolverReport) -> str:
    """Serialize a report to deterministic JSON (sorted keys, 2-space indent)."""
    return json.dumps(asdict(report), sort_keys=True, indent=2) + "\n"


def read_report(text: str | bytes) -> SolverReport:
    """Inverse of :func:`emit_report`."""
    if isinstance(text, bytes):
        text = text.decode()
    raw = json.loads(text)
    residuals = Residuals(**raw["residuals"]) if raw["residuals"] is not None else None
    return SolverReport(
        status=raw["status"],
        objective_primal=raw["objective_primal"],
        objective_dual=raw["objective_dual"],
        iterations=raw["iterations"],
        residuals=residuals,
        timing=Timing(**raw["timing"]),
        problem=ProblemStats(**raw["problem"]),
        tol=raw["tol"],
        solution=raw["solution"],
        certificate=raw["certificate"],
    )
