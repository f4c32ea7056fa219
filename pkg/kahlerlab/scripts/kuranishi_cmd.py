"""
Kuranishi command for KahlerLab.

Loads and validates a DGLA, solves the Maurer–Cartan equation order by order
in exact arithmetic and reports the solution, residual series and any
obstruction.
"""

import sys
from typing import Any, Dict, List, Optional

from core.errors import ConfigError, DGLAValidationError, KahlerLabError
from core.utils import PREFIX_ERROR, PREFIX_FAIL, PREFIX_INFO, PREFIX_OK, PREFIX_WARN

from .error_handlers import describe_error, exit_code_for
from .file_ops import emit_report


def solve_dgla(config: Any):
    """Validate, solve and judge; returns (report, exit code)."""
    from core.kuranishi import default_linear_terms, dgla_validate, kuranishi_solve, load_dgla
    from core.rational import format_rational
    from core.reports import RunReport

    report = RunReport(command="kuranishi", config=config.to_dict())
    D = load_dgla(config.dgla)
    validation = dgla_validate(D)
    record: Dict[str, Any] = {"dgla": D.name, "dims": {str(k): v for k, v in sorted(D.dims.items())},
                              "validation": validation.to_dict()}
    report.records = [record]
    if not validation.valid:
        report.summary = {"passed": False, "reason": "invalid DGLA"}
        return report.finish(), 2

    linear: List[Any] = config.linear or default_linear_terms(D, validation.hodge)
    record["linear_terms"] = [[format_rational(c) for c in v] for v in linear]
    if not linear:
        record["solution"] = None
        passed = config.expect_obstruction is None
        report.summary = {"passed": passed, "reason": "no harmonic degree-1 classes; the family is trivial"}
        return report.finish(), 0 if passed else 1

    solution = kuranishi_solve(D, linear, order=config.order)
    record["solution"] = solution.to_dict()
    expected = config.expect_obstruction
    if expected is None:
        passed = solution.exact
        reason = "exact through order" if passed else (
            f"unexpected obstruction at order {solution.obstruction.order}" if solution.obstructed
            else "nonzero residual series")
    else:
        found = solution.obstruction.order if solution.obstructed else None
        passed = found == expected
        reason = f"obstruction expected at order {expected}, found at {found}"
    report.summary = {
        "passed": bool(passed),
        "reason": reason,
        "solved_order": solution.solved_order,
        "obstruction_order": solution.obstruction.order if solution.obstructed else None,
        "expected_obstruction": expected,
    }
    return report.finish(), 0 if passed else 1


def print_kuranishi_summary(report: Any) -> None:
    record = report.records[0]
    dims = ", ".join(f"V{k}={v}" for k, v in record["dims"].items())
    print(f"🧮 DGLA '{record['dgla']}' ({dims})")
    validation = record["validation"]
    if not validation["valid"]:
        for failure in validation["failures"]:
            print(f"{PREFIX_FAIL} {failure['axiom']} on {', '.join(failure['witness'])}: {failure['residual']}")
        return
    solution: Optional[Dict[str, Any]] = record.get("solution")
    if solution:
        for index, term in solution["phi"].get("readable", {}).items():
            print(f"   t^({index}): {term}")
        if solution["obstruction"]:
            ob = solution["obstruction"]
            print(f"{PREFIX_WARN} Obstructed at order {ob['order']} (t^({ob['index']})): {ob['readable']}")
    summary = report.summary
    prefix = PREFIX_OK if summary["passed"] else PREFIX_FAIL
    print(f"{prefix} {summary['reason']}")


def cmd_kuranishi(args: Any) -> int:
    """kuranishi --dgla NAME|PATH [--order N] [--expect-obstruction order=K]"""
    from core.runconfig import build_run_config, load_manifest

    try:
        manifest = load_manifest("kuranishi", getattr(args, "suite", None))
        config = build_run_config("kuranishi", args, manifest)
    except ConfigError as exc:
        print(f"{PREFIX_ERROR} Invalid configuration: {exc}", file=sys.stderr)
        return 2
    return execute_kuranishi(config)


def execute_kuranishi(config: Any) -> int:
    print(f"{PREFIX_INFO} Solving the Maurer-Cartan equation on '{config.dgla}' through order {config.order}...")
    try:
        report, code = solve_dgla(config)
    except (ConfigError, DGLAValidationError, FileNotFoundError, KahlerLabError) as exc:
        print(f"{PREFIX_ERROR} Failed to solve: {describe_error(exc)}", file=sys.stderr)
        return exit_code_for(exc)
    print_kuranishi_summary(report)
    emit_report(report, config)
    return code
