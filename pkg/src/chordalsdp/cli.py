"""Command-line front end: solve problems, benchmark a corpus, run the service.

``solve`` and ``bench`` call the library directly by default. With
``--remote URL``, ``solve`` becomes a thin client of a running service
(started locally with ``serve``), posting the file content and receiving the
same JSON report.

Objective values are reported in the SDPA file convention (the maximization
of the objective matrix against the equality data), matching the values
published with the SDPLIB collection; the solver minimizes the negated
objective internally.

Exit codes: 0 for Optimal or a proven infeasibility certificate, 2 when the
iteration limit is reached, 1 for file or input errors.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .sdpa import (
    STATUS_MAX_ITERS,
    ParseError,
    SolverReport,
    emit_report,
    parse_sdpa,
    read_report,
)
from .solver import SolverSettings, solve

THREADS_ENV = "CHORDALSDP_THREADS"


def _settings_from_options(tol, max_iters, alpha, check_interval, normalize, threads):
    threads = threads or int(os.environ.get(THREADS_ENV, "1"))
    return SolverSettings(
        tol=tol,
        max_iters=max_iters,
        alpha=alpha,
        check_interval=check_interval,
        normalize=normalize,
        threads=threads,
    )


def _exit_code(report: SolverReport) -> int:
    return 2 if report.status == STATUS_MAX_ITERS else 0


def _summary_line(name: str, report: SolverReport) -> str:
    obj = (
        f"{report.objective_primal:.6g}"
        if report.objective_primal is not None
        else "-"
    )
    return (
        f"{name}: {report.status}  objective={obj}  iterations={report.iterations}  "
        f"setup={report.timing.setup_s:.3f}s  total={report.timing.total_s:.3f}s"
    )


def _solve_remote(url: str, text: str, settings: SolverSettings, decompose: bool):
    import httpx

    payload = {
        "sdpa": text,
        "decompose": decompose,
        "settings": {
            "tol": settings.tol,
            "max_iters": settings.max_iters,
            "alpha": settings.alpha,
            "check_interval": settings.check_interval,
            "normalize": settings.normalize,
            "threads": settings.threads,
        },
    }
    response = httpx.post(url.rstrip("/") + "/solve", json=payload, timeout=None)
    response.raise_for_status()
    return read_report(json.dumps(response.json()))


solver_options = [
    click.option("--tol", type=float, default=SolverSettings.tol, show_default=True,
                 help="relative termination tolerance"),
    click.option("--max-iters", type=int, default=SolverSettings.max_iters,
                 show_default=True, help="iteration limit"),
    click.option("--alpha", type=float, default=SolverSettings.alpha, show_default=True,
                 help="over-relaxation parameter in [1, 2)"),
    click.option("--check-interval", type=int, default=SolverSettings.check_interval,
                 show_default=True, help="iterations between residual checks"),
    click.option("--normalize/--no-normalize", default=SolverSettings.normalize,
                 show_default=True, help="rescale objective/rhs to unit norm internally"),
    click.option("--threads", type=int, default=None,
                 help=f"cone-projection thread cap (default ${THREADS_ENV} or 1)"),
    click.option("--decompose/--no-decompose", "decompose", default=True,
                 show_default=True,
                 help="split PSD cones along the chordal extension"),
]


def add_options(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return wrap


@click.group()
def main():
    """Chordal-decomposition semidefinite programming solver."""


@main.command("solve")
@click.argument("input_path", type=click.Path(path_type=Path))
@add_options(solver_options)
@click.option("--output", type=click.Path(path_type=Path), default=None,
              help="write the JSON report here instead of stdout")
@click.option("--trace", type=click.Path(path_type=Path), default=None,
              help="append per-check residual lines to this file")
@click.option("--remote", type=str, default=None, metavar="URL",
              help="send the problem to a running chordalsdp service")
def cmd_solve(input_path, tol, max_iters, alpha, check_interval, normalize, threads,
              decompose, output, trace, remote):
    """Solve one SDPA sparse (.dat-s) problem and emit a JSON report."""
    if not input_path.exists():
        click.echo(f"error: input file not found: {input_path}", err=True)
        sys.exit(1)
    settings = _settings_from_options(tol, max_iters, alpha, check_interval,
                                      normalize, threads)
    try:
        text = input_path.read_text()
        if remote:
            report = _solve_remote(remote, text, settings, decompose)
        else:
            problem = parse_sdpa(text)
            trace_fh = open(trace, "a") if trace else None
            try:
                callback = None
                if trace_fh is not None:
                    def callback(info, fh=trace_fh):
                        fh.write(
                            f"{info.iteration} {info.pres:.6e} {info.dres:.6e} "
                            f"{info.gap:.6e} {info.tau:.6e} {info.kappa:.6e}\n"
                        )
                report = solve(problem, settings, split_cones=decompose,
                               iteration_callback=callback)
            finally:
                if trace_fh is not None:
                    trace_fh.close()
    except ParseError as exc:
        click.echo(f"error: {input_path}: {exc}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    doc = emit_report(report)
    if output:
        output.write_text(doc)
    else:
        click.echo(doc, nl=False)
    click.echo(_summary_line(input_path.name, report), err=True)
    sys.exit(_exit_code(report))


@main.command("bench")
@click.argument("directory", type=click.Path(path_type=Path))
@add_options(solver_options)
@click.option("--output", type=click.Path(path_type=Path), default=None,
              help="write the JSON benchmark table here instead of stdout")
def cmd_bench(directory, tol, max_iters, alpha, check_interval, normalize, threads,
              decompose, output):
    """Solve every .dat-s file in DIRECTORY and tabulate the results."""
    if not directory.is_dir():
        click.echo(f"error: not a directory: {directory}", err=True)
        sys.exit(1)
    settings = _settings_from_options(tol, max_iters, alpha, check_interval,
                                      normalize, threads)
    rows = []
    for path in sorted(directory.glob("*.dat-s")):
        try:
            report = solve(parse_sdpa(path), settings, split_cones=decompose)
        except Exception as exc:  # keep the run going, record the failure
            rows.append({"problem": path.stem, "error": str(exc)})
            click.echo(f"{path.stem}: FAILED ({exc})", err=True)
            continue
        rows.append(
            {
                "problem": path.stem,
                "n": report.problem.n,
                "m": report.problem.m,
                "p": report.problem.p,
                "clique_max": report.problem.clique_max,
                "clique_min": report.problem.clique_min,
                "status": report.status,
                "objective": report.objective_primal,
                "iterations": report.iterations,
                "setup_s": report.timing.setup_s,
                "total_s": report.timing.total_s,
                "per_iteration_s": report.timing.per_iteration_s,
            }
        )
        click.echo(_summary_line(path.stem, report), err=True)
    doc = json.dumps({"settings": {"tol": settings.tol, "alpha": settings.alpha,
                                   "max_iters": settings.max_iters,
                                   "decompose": decompose},
                      "rows": rows}, indent=2, sort_keys=True) + "\n"
    if output:
        output.write_text(doc)
    else:
        click.echo(doc, nl=False)
    sys.exit(0)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8347, show_default=True, type=int)
def cmd_serve(host, port):
    """Run the HTTP service wrapping the solver."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
