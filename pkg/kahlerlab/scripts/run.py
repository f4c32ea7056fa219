"""
Run command for KahlerLab.

Runs one suite manifest, or every enabled one, through the command its
manifest names and writes one report per suite.
"""

import argparse
import sys
from typing import Any, Callable, Dict, List, Optional

from core.errors import ConfigError
from core.utils import (
    COLOR_GREEN,
    COLOR_RED,
    COLOR_YELLOW,
    PREFIX_ERROR,
    PREFIX_INFO,
    _format_table,
    color_text,
)
from core.yaml import list_enabled_suite_ids

from .identities import execute_identities
from .kuranishi_cmd import execute_kuranishi
from .spectrum import execute_spectrum

EXECUTORS: Dict[str, Callable[[Any], int]] = {
    "identities": execute_identities,
    "spectrum": execute_spectrum,
    "kuranishi": execute_kuranishi,
}

_OUTCOME = {0: ("pass", COLOR_GREEN), 1: ("FAIL", COLOR_RED), 2: ("ERROR", COLOR_YELLOW)}


def run_suite(suite_id: str, force: bool = False, workers: Optional[int] = None) -> int:
    """Run one suite by manifest; returns its exit code."""
    from core.runconfig import build_run_config, load_manifest
    from core.yaml import load_suite_yaml_by_filename

    try:
        _, raw = load_suite_yaml_by_filename(suite_id)
        command = str(raw.get("command", ""))
        if command not in EXECUTORS:
            raise ConfigError(f"Suite '{suite_id}' names unknown command {command!r}")
        manifest = load_manifest(command, suite_id)
        config = build_run_config(command, argparse.Namespace(force=force, workers=workers), manifest)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"{PREFIX_ERROR} Invalid suite '{suite_id}': {exc}", file=sys.stderr)
        return 2
    print(f"\n{PREFIX_INFO} Suite '{config.suite}' ({command})")
    return EXECUTORS[command](config)


def combine_exit_codes(codes: List[int]) -> int:
    """2 if any input error, else 1 if any failure, else 0."""
    if any(code == 2 for code in codes):
        return 2
    return 1 if any(codes) else 0


def run_main(args: Any) -> int:
    force = bool(getattr(args, "force", False))
    workers = getattr(args, "workers", None)
    if not getattr(args, "all", False):
        return run_suite(args.suite, force=force, workers=workers)

    suite_ids = list_enabled_suite_ids()
    if not suite_ids:
        print("No enabled suites.")
        return 0
    print(f"Running {len(suite_ids)} enabled suites...")
    codes = [run_suite(s, force=force, workers=workers) for s in suite_ids]
    rows = []
    for suite_id, code in zip(suite_ids, codes):
        label, color = _OUTCOME.get(code, _OUTCOME[1])
        rows.append([suite_id, color_text(label, color), str(code)])
    print()
    print(_format_table(["SUITE", "RESULT", "EXIT"], rows))
    return combine_exit_codes(codes)
