"""
Report writers for KahlerLab.

Schema-versioned JSON reports, CSV eigenvalue tables and the overwrite prompt
used before replacing an existing file.
"""

from __future__ import annotations

import csv
import json
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional

import numpy as np

from . import constants
from .utils import PREFIX_WARN


@dataclass
class RunReport:
    command: str
    config: Dict[str, Any]
    records: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    started: float = field(default_factory=time.time)
    wall_time: float = 0.0

    def finish(self) -> "RunReport":
        self.wall_time = time.time() - self.started
        return self

    @property
    def passed(self) -> bool:
        return bool(self.summary.get("passed", False))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": constants.REPORT_SCHEMA,
            "tool_version": constants.TOOL_VERSION,
            "command": self.command,
            "config": self.config,
            "records": self.records,
            "summary": self.summary,
            "timing": {
                "timestamp": datetime.fromtimestamp(self.started, tz=timezone.utc).isoformat(),
                "wall_time_s": round(self.wall_time, 3),
            },
        }


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (Fraction, Path)):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps_report(report: RunReport) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False, default=_json_default) + "\n"


def without_timing(text: str) -> Dict[str, Any]:
    """Parsed report minus its timing block, for reproducibility comparisons."""
    data = json.loads(text)
    data.pop("timing", None)
    return data


def default_output_path(name: str, suffix: str = ".json") -> Path:
    return Path(constants.OUTPUT_DIR) / f"{name}{suffix}"


def confirm_overwrite(path: Path, force: bool = False) -> bool:
    """True if path may be written. Asks only when it exists and stdin is a TTY."""
    if force or not path.exists() or not sys.stdin.isatty():
        return True
    import questionary

    return bool(questionary.confirm(f"{path} already exists. Overwrite?", default=False).unsafe_ask())


def _prepare(path: Path, force: bool) -> Optional[Path]:
    path = Path(path)
    if not confirm_overwrite(path, force):
        print(f"{PREFIX_WARN} Kept existing file {path}")
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_json_report(report: RunReport, path: Path, force: bool = False) -> Optional[Path]:
    path = _prepare(path, force)
    if path is None:
        return None
    path.write_text(dumps_report(report), encoding="utf-8")
    return path


def write_csv(rows: Iterable[Mapping[str, Any]], path: Path, force: bool = False,
              columns: Iterable[str] = constants.CSV_COLUMNS) -> Optional[Path]:
    path = _prepare(path, force)
    if path is None:
        return None
    columns = list(columns)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _json_default(v) if isinstance(v, np.generic) else v for key, v in row.items()})
    return path
