"""Chordal-decomposition semidefinite programming solver.

Parses SDPA sparse files, splits large PSD cones into clique-sized ones over
a chordal extension of the aggregate sparsity pattern, and solves the
homogeneous self-dual embedding of the decomposed primal-dual pair with ADMM.
Returns optimal solutions or infeasibility certificates.
"""

from .decompose import DecomposedProblem, aggregate_pattern, decompose
from .graphs import (
    CliqueDecomposition,
    DimensionMismatch,
    NotChordal,
    SparsityPattern,
    chordal_extend,
    is_chordal,
    maximal_cliques,
    selector_adjoint,
    selector_apply,
)
from .sdpa import (
    DuplicateEntry,
    ParseError,
    SdpProblem,
    SolverReport,
    emit_report,
    parse_sdpa,
    read_report,
)
from .solver import (
    FactorizationFailure,
    SolverSettings,
    TauZero,
    affine_project,
    build_hsde,
    iterate,
    project_cone,
    recover,
    residuals,
    setup_cache,
    solve,
    solve_decomposed,
    solve_inner,
)
from .symmat import (
    EigenFailure,
    NonSquareLength,
    SymMatrix,
    VecMatrix,
    mat,
    project_psd,
    vec,
)

__version__ = "0.1.0"

__all__ = [
    "CliqueDecomposition",
    "DecomposedProblem",
    "DimensionMismatch",
    "DuplicateEntry",
    "EigenFailure",
    "FactorizationFailure",
    "NonSquareLength",
    "NotChordal",
    "ParseError",
    "SdpProblem",
    "SolverReport",
    "SolverSettings",
    "SparsityPattern",
    "SymMatrix",
    "TauZero",
    "VecMatrix",
    "affine_project",
    "aggregate_pattern",
    "build_hsde",
    "chordal_extend",
    "decompose",
    "emit_report",
    "is_chordal",
    "iterate",
    "mat",
    "maximal_cliques",
    "parse_sdpa",
    "project_cone",
    "project_psd",
    "read_report",
    "recover",
    "residuals",
    "selector_adjoint",
    "selector_apply",
    "setup_cache",
    "solve",
    "solve_decomposed",
    "solve_inner",
    "vec",
]
