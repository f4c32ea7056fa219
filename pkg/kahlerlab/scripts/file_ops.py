"""
File helpers for KahlerLab.

Output path resolution and report emission shared by the run commands.
"""

from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

from core import constants
from core.utils import PREFIX_OK


def report_name(config: Any) -> str:
    """Suite name, or the command name for ad hoc runs."""
    return str(config.suite or config.command)


def resolve_output_path(config: Any, suffix: str = ".json") -> Path:
    if config.output:
        return Path(config.output)
    return Path(constants.OUTPUT_DIR) / f"{report_name(config)}{suffix}"


def ensure_output_dir(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def emit_report(report: Any, config: Any) -> Optional[Path]:
    """Write the JSON report and announce where it went."""
    from core.reports import write_json_report

    path = write_json_report(report, resolve_output_path(config), force=config.force)
    if path is not None:
        print(f"{PREFIX_OK}: Report written to {path}")
    return path


def emit_csv(rows: Iterable[Mapping[str, Any]], path: Path, force: bool) -> Optional[Path]:
    from core.reports import write_csv

    written = write_csv(rows, path, force=force)
    if written is not None:
        print(f"{PREFIX_OK}: Eigenvalue table written to {written}")
    return written
