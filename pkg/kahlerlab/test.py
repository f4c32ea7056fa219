#!/usr/bin/env python3
"""
Self-test utilities for KahlerLab.

Imports every public name of the core and scripts packages, plus the numerical
modules, so a broken install shows up before any suite runs. External
dependencies are checked separately by the dependency checker.
"""

from __future__ import annotations

from core.utils import PREFIX_ERROR

CORE_EXPORTS = [
    "load_suite_yaml_by_filename",
    "find_suite_yaml_path",
    "set_suite_enabled",
    "list_suite_manifests",
    "list_enabled_suite_ids",
    "KahlerLabError",
    "ConfigError",
    "color_text",
    "_format_table",
]

SCRIPTS_EXPORTS = [
    "list_suites",
    "inspect_suite",
    "print_dependency_status",
    "require_dependencies",
    "handle_yaml_error",
    "handle_numeric_error",
    "print_error_with_suggestion",
    "cmd_identities",
    "cmd_spectrum",
    "cmd_kuranishi",
    "run_main",
]

MODULE_IMPORTS = [
    "from core.jets import Jet, jet_space, jet_arithmetic, jmat_ops, jet_partial",
    "from core.kahler import metric_from_potential, laplacian_f, ricci_potential_from_potentials",
    "from core.constraints import ConstraintSet, random_constrained_phi",
    "from core.chart import build_deformed_chart, complex_structure_tensor",
    "from core.identity_lab import CHECKS, run_check",
    "from core.spectral import build_grid, BasisSet, perturb_metric, analyze_spectrum",
    "from core.rational import QMatrix, parse_rational",
    "from core.kuranishi import load_dgla, dgla_validate, kuranishi_solve",
    "from core.runconfig import build_run_config, parse_seeds, parse_perturbation",
    "from core.reports import RunReport, write_json_report, write_csv",
    "from core.argaparse import build_arg_parser, format_full_help",
    "from core.utils import PREFIX_OK, PREFIX_ERROR, PREFIX_WARN, PREFIX_INFO",
    "from core.constants import SUITE_MANIFEST_DIR, DGLA_DIR, OUTPUT_DIR",
]


def run_import_self_test() -> bool:
    """Run a quick self-test to ensure internal module imports work.

    Returns True if all checks pass, False otherwise.
    """
    print("Running import self-tests...")
    success_count = 0
    fail_count = 0

    def _try_exec(expr: str) -> bool:
        try:
            exec(expr, globals(), {})
            return True
        except Exception as exc:  # noqa: BLE001 - report to user
            print(f"{PREFIX_ERROR} {expr} -> {exc}")
            return False

    expressions = (
        [f"from core import {name}" for name in CORE_EXPORTS]
        + [f"from scripts import {name}" for name in SCRIPTS_EXPORTS]
        + MODULE_IMPORTS
    )
    for expr in expressions:
        if _try_exec(expr):
            success_count += 1
        else:
            fail_count += 1

    # Config imports are optional, don't count as failure
    if _try_exec("from config import TOOL_VERSION"):
        success_count += 1

    total = success_count + fail_count
    success_rate = (success_count / total * 100) if total > 0 else 0
    print(f"Import self-test: {success_count}/{total} passed ({success_rate:.1f}%)")

    if fail_count > 0:
        print(f"{PREFIX_ERROR} {fail_count} import(s) failed. Check module structure.")

    return fail_count == 0
