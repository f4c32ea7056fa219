"""
Identities command for KahlerLab.

Fans the selected identity checks out over seeds on a process pool, merges the
records in task order and summarizes them per check.
"""

import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from core.errors import ConfigError, KahlerLabError
from core.utils import (
    PREFIX_ERROR,
    PREFIX_FAIL,
    PREFIX_INFO,
    _format_table,
    format_float,
    pass_label,
)

from .error_handlers import describe_error
from .file_ops import emit_report

try:
    from config import RESULT_TABLE_MAX_WIDTH
except ImportError:
    RESULT_TABLE_MAX_WIDTH = 40

# Failing records printed individually before the summary table
MAX_FAILURES_SHOWN = 10

Job = Tuple[str, Dict[str, Any], int, float, bool]


def map_tasks(func: Callable[[Any], Any], jobs: Sequence[Any], workers: Optional[int] = None) -> List[Any]:
    """func over jobs, in job order. Runs inline for a single worker or a single job."""
    if workers == 1 or len(jobs) <= 1:
        return [func(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, jobs, chunksize=max(1, len(jobs) // (4 * (workers or 8)))))


def _run_task(job: Job) -> Dict[str, Any]:
    """Run one (check, params, seed) job; domain errors become failed records."""
    from core.identity_lab import run_check

    check, task_params, seed, tolerance, control = job
    params = dict(task_params)
    tolerance = float(params.pop("tolerance", tolerance))
    try:
        record = run_check(check, seed, tolerance, control=control, **params).to_dict()
    except KahlerLabError as exc:
        record = {"identity": check, "m": params.get("m"), "seed": seed, "passed": False,
                  "tolerance": tolerance, "error": f"{type(exc).__name__}: {exc}"}
    record["check"] = check
    record["task"] = dict(params)
    return record


def _median(values: Iterable[float]) -> Optional[float]:
    import numpy as np

    values = [v for v in values if v is not None]
    return float(np.median(values)) if values else None


def summarize_identities(records: List[Dict[str, Any]], control_floor: float) -> Dict[str, Any]:
    """Per-check counts, worst residual and the median control residual."""
    groups: Dict[str, List[Dict[str, Any]]] = {}
    for record in records:
        groups.setdefault(record["check"], []).append(record)

    checks = {}
    for name, group in groups.items():
        relatives = [r["relative"] for r in group if "relative" in r]
        control = _median(r.get("control") for r in group)
        checks[name] = {
            "runs": len(group),
            "passed": sum(1 for r in group if r.get("passed")),
            "errors": sum(1 for r in group if "error" in r),
            "max_relative": max(relatives) if relatives else None,
            "control_median": control,
            # median control residual above the floor
            "control_power": None if control is None else bool(control > control_floor),
        }

    passed_runs = sum(1 for r in records if r.get("passed"))
    powered = all(c["control_power"] is not False for c in checks.values())
    return {
        "total": len(records),
        "passed_count": passed_runs,
        "failed_count": len(records) - passed_runs,
        "control_floor": control_floor,
        "checks": checks,
        "passed": bool(records) and passed_runs == len(records) and powered,
    }


def run_identities(config: Any):
    """Execute every task for every seed and return the finished RunReport."""
    from core.reports import RunReport

    jobs: List[Job] = [(task["check"], task["params"], seed, config.tolerance, config.control)
                       for task in config.tasks for seed in config.seeds]
    print(f"{PREFIX_INFO} Running {len(jobs)} identity checks "
          f"({len(config.tasks)} tasks x {len(config.seeds)} seeds)...")
    report = RunReport(command="identities", config=config.to_dict())
    report.records = map_tasks(_run_task, jobs, config.workers)
    report.summary = summarize_identities(report.records, config.control_floor)
    return report.finish()


def print_identity_summary(report: Any) -> None:
    failures = [r for r in report.records if not r.get("passed")]
    for record in failures[:MAX_FAILURES_SHOWN]:
        detail = record.get("error") or f"relative {format_float(record.get('relative'))}"
        print(f"{PREFIX_FAIL} {record['identity']} m={record.get('m')} seed={record['seed']} "
              f"{record['task']}: {detail}")
    if len(failures) > MAX_FAILURES_SHOWN:
        print(f"   ... {len(failures) - MAX_FAILURES_SHOWN} more failures in the report")

    rows = []
    for name, stats in report.summary["checks"].items():
        all_passed = stats["passed"] == stats["runs"] and stats["control_power"] is not False
        rows.append([name, str(stats["runs"]), str(stats["passed"]), format_float(stats["max_relative"]),
                     format_float(stats["control_median"]), pass_label(all_passed)])
    print(_format_table(["CHECK", "RUNS", "PASSED", "MAX REL", "CONTROL MED", "RESULT"], rows,
                        max_width=RESULT_TABLE_MAX_WIDTH))
    s = report.summary
    print(f"{s['passed_count']}/{s['total']} passed in {report.wall_time:.1f}s")


def cmd_identities(args: Any) -> int:
    """identities [--suite S] [--check NAME] [--m M] [--seeds SPEC] [--control]"""
    from core.runconfig import build_run_config, load_manifest

    try:
        manifest = load_manifest("identities", getattr(args, "suite", None))
        config = build_run_config("identities", args, manifest)
    except ConfigError as exc:
        print(f"{PREFIX_ERROR} Invalid configuration: {exc}", file=sys.stderr)
        return 2
    return execute_identities(config)


def execute_identities(config: Any) -> int:
    try:
        report = run_identities(config)
    except Exception as exc:
        print(f"{PREFIX_ERROR} Failed to run identity checks: {describe_error(exc)}", file=sys.stderr)
        return 1
    print_identity_summary(report)
    emit_report(report, config)
    return 0 if report.passed else 1
