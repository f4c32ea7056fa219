"""
List helpers for KahlerLab.

Functions to list verification suites and their state.
"""

from typing import Any, Dict, List

from core import constants
from core.utils import COLOR_GREEN, COLOR_GRAY, COLOR_RED, _format_table, color_text
from core.yaml import list_suite_manifests

try:
    from config import LIST_BASIC_MAX_WIDTH, LIST_DETAILED_MAX_WIDTH
except ImportError:
    LIST_BASIC_MAX_WIDTH = 60
    LIST_DETAILED_MAX_WIDTH = 30


def summarize_params(params: Dict[str, Any]) -> str:
    """Short one-line rendering of a manifest's params."""
    parts = []
    for key, value in (params or {}).items():
        if key == "checks":
            names = [c if isinstance(c, str) else c.get("check", "?") for c in value or []]
            parts.append(f"checks={','.join(names)}")
        else:
            parts.append(f"{key}={value}")
    return "; ".join(parts)


def _last_result(stem: str) -> str:
    path = constants.OUTPUT_DIR / f"{stem}.json"
    if not path.exists():
        return color_text("-", COLOR_GRAY)
    try:
        import json

        summary = json.loads(path.read_text(encoding="utf-8")).get("summary", {})
    except (OSError, ValueError):
        return color_text("?", COLOR_GRAY)
    return color_text("pass", COLOR_GREEN) if summary.get("passed") else color_text("FAIL", COLOR_RED)


def list_suites(detailed: bool = False) -> None:
    """Print the list of suites in a clean table format."""
    manifests = list_suite_manifests()
    if not manifests:
        print(f"No YAML files in the '{constants.SUITE_MANIFEST_DIR}' directory.")
        return

    rows: List[List[str]] = []
    for path, data in manifests:
        name = str(data.get("name") or path.stem)
        enabled = data.get("enabled") is True
        enabled_str = color_text("True", COLOR_GREEN) if enabled else color_text("False", COLOR_RED)
        row = [name, enabled_str, str(data.get("command", "?")), _last_result(path.stem),
               str(data.get("description") or "")]
        if detailed:
            row.append(summarize_params(data.get("params") or {}))
        rows.append(row)

    headers = ["SUITE", "ENABLE", "COMMAND", "LAST", "DESCRIPTION"]
    if detailed:
        table = _format_table(headers + ["PARAMS"], rows, max_width=LIST_DETAILED_MAX_WIDTH)
    else:
        table = _format_table(headers, rows, max_width=LIST_BASIC_MAX_WIDTH)
    print(table)
