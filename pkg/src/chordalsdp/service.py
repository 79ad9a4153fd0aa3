"""HTTP front end: solve and analyze SDPA problems over a small JSON API.

The service wraps the core library so long-running solver capacity can be
shared by multiple clients. Requests carry the SDPA file content inline;
responses mirror :class:`chordalsdp.sdpa.SolverReport` field for field.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .decompose import decompose
from .sdpa import ParseError, SolverReport, parse_sdpa
from .solver import SolverSettings, solve


class SettingsModel(BaseModel):
    """Solver parameters accepted by the API; defaults match the library."""

    tol: float = Field(default=SolverSettings.tol, gt=0)
    max_iters: int = Field(default=SolverSettings.max_iters, ge=1)
    alpha: float = Field(default=SolverSettings.alpha, ge=1.0, lt=2.0)
    check_interval: int = Field(default=SolverSettings.check_interval, ge=1)
    normalize: bool = SolverSettings.normalize
    threads: int = Field(default=SolverSettings.threads, ge=1)

    def to_settings(self) -> SolverSettings:
        return SolverSettings(
            tol=self.tol,
            max_iters=self.max_iters,
            alpha=self.alpha,
            check_interval=self.check_interval,
            normalize=self.normalize,
            threads=self.threads,
        )


class SolveRequest(BaseModel):
    sdpa: str = Field(description="SDPA sparse format file content")
    settings: SettingsModel = SettingsModel()
    decompose: bool = Field(
        default=True, description="split cones along the chordal extension"
    )


class ResidualsModel(BaseModel):
    primal: float
    dual: float
    gap: float


class TimingModel(BaseModel):
    setup_s: float
    iterations_s: float
    total_s: float
    per_iteration_s: float


class ProblemStatsModel(BaseModel):
    n: int
    m: int
    blocks: list[int]
    p: int
    clique_max: int
    clique_min: int
    n_d: int


class SolveResponse(BaseModel):
    status: str
    objective_primal: float | None
    objective_dual: float | None
    iterations: int
    residuals: ResidualsModel | None
    timing: TimingModel
    problem: ProblemStatsModel
    tol: float
    solution: dict | None
    certificate: dict | None

    @classmethod
    def from_report(cls, report: SolverReport) -> "SolveResponse":
        return cls(**asdict(report))


class AnalyzeRequest(BaseModel):
    sdpa: str
    decompose: bool = True


class AnalyzeResponse(BaseModel):
    n: int
    m: int
    blocks: list[int]
    p: int
    clique_sizes: list[int]
    clique_max: int
    clique_min: int
    n_d: int
    aggregate_edges: int
    extension_fill_edges: int


app = FastAPI(
    title="chordalsdp",
    version=__version__,
    description="Clique-decomposed semidefinite programming solver",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/solve", response_model=SolveResponse)
def solve_endpoint(request: SolveRequest) -> SolveResponse:
    try:
        problem = parse_sdpa(request.sdpa)
    except ParseError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    report = solve(
        problem, request.settings.to_settings(), split_cones=request.decompose
    )
    return SolveResponse.from_report(report)


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze_endpoint(request: AnalyzeRequest) -> AnalyzeResponse:
    """Pattern and clique statistics without running the solver."""
    try:
        problem = parse_sdpa(request.sdpa)
    except ParseError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    dp = decompose(problem, split_cones=request.decompose)
    sizes = [int(s) for s in dp.dec.sizes]
    return AnalyzeResponse(
        n=dp.n,
        m=dp.m,
        blocks=[int(d) for d in dp.block_dims],
        p=dp.p,
        clique_sizes=sizes,
        clique_max=max(sizes) if sizes else 0,
        clique_min=min(sizes) if sizes else 0,
        n_d=dp.n_d,
        aggregate_edges=len(dp.aggregate.edges),
        extension_fill_edges=len(dp.dec.extended_pattern.edges) - len(dp.aggregate.edges),
    )
