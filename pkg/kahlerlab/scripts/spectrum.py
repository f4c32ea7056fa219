"""
Spectrum command for KahlerLab.

Galerkin spectra of the weighted Laplacians on CP¹ for the Fubini–Study metric
and each requested perturbation, with the bound checks, CSV tables and an
optional convergence plot.
"""

import re
import sys
from pathlib import Path
from typing import Any, Dict, List, Tuple

from core.errors import ConfigError
from core.utils import (
    PREFIX_ERROR,
    PREFIX_INFO,
    PREFIX_OK,
    PREFIX_WARN,
    _format_table,
    format_float,
    pass_label,
)

from .error_handlers import describe_error, handle_numeric_error
from .file_ops import emit_csv, emit_report
from .identities import map_tasks

try:
    from config import RESULT_TABLE_MAX_WIDTH
except ImportError:
    RESULT_TABLE_MAX_WIDTH = 40

SpectrumJob = Tuple[Dict[str, Any], Tuple[int, int], int, int, int, int, int, Tuple[int, ...]]


def metric_slug(label: str) -> str:
    """File-name friendly form of a metric label, e.g. '0.1:quad' -> 'eps0.1-quad'."""
    if label == "fubini-study":
        return label
    return "eps" + re.sub(r"[^0-9A-Za-z.]+", "-", label)


def csv_path_for(base: Path, label: str, first: bool) -> Path:
    """The first metric writes to base; later metrics get their slug before the suffix."""
    if first:
        return base
    return base.with_name(f"{base.stem}.{metric_slug(label)}{base.suffix or '.csv'}")


@handle_numeric_error
def _analyze(job: SpectrumJob) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """One metric: analysis record plus its CSV rows."""
    from core.runconfig import parse_perturbation
    from core.spectral import (
        BasisSet,
        SpectralCheck,
        analyze_spectrum,
        build_grid,
        convergence_table,
        fubini_study_check,
        is_monotone,
        perturb_metric,
    )

    pert_dict, grid_shape, N, seed, samples, pairs, count, degrees = job
    perturbation = parse_perturbation(pert_dict)
    grid = build_grid(*grid_shape)
    basis = BasisSet(N)
    basis.check_grid(grid)
    metric = perturb_metric(perturbation, grid)
    analysis = analyze_spectrum(grid, basis, metric, seed=seed, samples=samples, pairs=pairs, count=count)
    checks = list(analysis.checks)
    if perturbation.eps == 0:
        checks.append(fubini_study_check(analysis.functions, count))

    table = None
    if degrees:
        table = convergence_table(degrees, perturbation, grid, count=count)
        monotone = is_monotone(table)
        checks.append(SpectralCheck("convergence_monotone", float(table[-1]["error"]), 0.0, monotone,
                                    "error non-increasing in N"))

    f, q = analysis.functions, analysis.forms
    record = {
        "metric": perturbation.label,
        "perturbation": perturbation.to_dict(),
        "basis": N,
        "grid": list(grid_shape),
        "passed": all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
        "functions": {
            "eigenvalues": [float(v) for v in f.eigenvalues[:count]],
            "multiplicities": f.multiplicities[:6],
            "condition": f.diagnostics.get("condition"),
        },
        "forms01": {
            "eigenvalues": [float(v) for v in q.eigenvalues[:count]],
            "multiplicities": q.multiplicities[:6],
            "condition": q.diagnostics.get("condition"),
        },
        "average_scalar_curvature": f.diagnostics.get("average_scalar_curvature"),
        "convergence": table,
    }
    return record, f.rows() + q.rows()


def run_spectrum(config: Any):
    """Analyze every metric in config order; returns (report, csv rows per metric)."""
    from core.reports import RunReport

    degrees = tuple(config.degrees) if config.plot else ()
    jobs: List[SpectrumJob] = [
        (p.to_dict(), tuple(config.grid), config.basis, config.seed, config.samples, config.pairs,
         config.count, degrees)
        for p in config.perturbations
    ]
    print(f"{PREFIX_INFO} Solving spectra for {len(jobs)} metric(s), basis N={config.basis}, "
          f"grid {config.grid[0]}x{config.grid[1]}...")
    report = RunReport(command="spectrum", config=config.to_dict())
    results = map_tasks(_analyze, jobs, config.workers)
    report.records = [record for record, _ in results]
    rows = {record["metric"]: csv_rows for record, csv_rows in results}
    failed = [c["name"] for r in report.records for c in r["checks"] if not c["passed"]]
    report.summary = {
        "metrics": len(report.records),
        "checks": sum(len(r["checks"]) for r in report.records),
        "failed_checks": failed,
        "passed": not failed,
    }
    return report.finish(), rows


def print_spectrum_summary(report: Any) -> None:
    for record in report.records:
        lam = record["functions"]["eigenvalues"]
        print(f"\n📈 {record['metric']}: λ = {', '.join(f'{v:.6f}' for v in lam[:8])} ...")
        rows = [[c["name"], format_float(c["value"]), format_float(c["tolerance"]), pass_label(c["passed"]),
                 c["detail"]] for c in record["checks"]]
        print(_format_table(["CHECK", "VALUE", "BOUND", "RESULT", "DETAIL"], rows,
                            max_width=RESULT_TABLE_MAX_WIDTH))
    s = report.summary
    print(f"\n{s['checks'] - len(s['failed_checks'])}/{s['checks']} checks passed "
          f"over {s['metrics']} metric(s) in {report.wall_time:.1f}s")


def write_spectrum_artifacts(report: Any, rows: Dict[str, List[Dict[str, Any]]], config: Any) -> None:
    if config.csv:
        for i, (label, metric_rows) in enumerate(rows.items()):
            emit_csv(metric_rows, csv_path_for(Path(config.csv), label, i == 0), config.force)
    if config.plot:
        tables = {r["metric"]: r["convergence"] for r in report.records if r.get("convergence")}
        try:
            from core.reports import confirm_overwrite
            from core.spectral import plot_convergence

            path = Path(config.plot)
            if confirm_overwrite(path, config.force):
                path.parent.mkdir(parents=True, exist_ok=True)
                plot_convergence(tables, str(path), title="Galerkin convergence, CP¹")
                print(f"{PREFIX_OK}: Convergence plot written to {path}")
        except ImportError as exc:
            print(f"{PREFIX_WARN} Skipping plot, matplotlib unavailable: {exc}")


def cmd_spectrum(args: Any) -> int:
    """spectrum [--basis N] [--perturb SPEC]... [--grid RxA] [--csv PATH] [--plot PATH]"""
    from core.runconfig import build_run_config, load_manifest

    try:
        manifest = load_manifest("spectrum", getattr(args, "suite", None))
        config = build_run_config("spectrum", args, manifest)
    except ConfigError as exc:
        print(f"{PREFIX_ERROR} Invalid configuration: {exc}", file=sys.stderr)
        return 2
    return execute_spectrum(config)


def execute_spectrum(config: Any) -> int:
    try:
        report, rows = run_spectrum(config)
    except ConfigError as exc:
        print(f"{PREFIX_ERROR} Invalid configuration: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"{PREFIX_ERROR} Failed to compute spectra: {describe_error(exc)}", file=sys.stderr)
        return 1
    print_spectrum_summary(report)
    emit_report(report, config)
    write_spectrum_artifacts(report, rows, config)
    return 0 if report.passed else 1
