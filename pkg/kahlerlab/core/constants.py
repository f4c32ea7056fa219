"""
Constants for KahlerLab core.

Paths resolved from the user-editable config.py, with built-in defaults when it
cannot be imported.
"""

import os
import sys
from pathlib import Path


def find_project_root() -> Path:
    """Find the project root by looking for app.py next to a suites/ directory."""
    current_path = Path(__file__).resolve().parent
    for parent in [current_path] + list(current_path.parents):
        if (parent / "app.py").exists() and (parent / "suites").exists():
            return parent
    # Fallback: assume structure kahlerlab/core/constants.py
    return Path(__file__).resolve().parent.parent.parent


PROJECT_ROOT = find_project_root()

try:
    config_dir = PROJECT_ROOT / "kahlerlab"
    if str(config_dir) not in sys.path:
        sys.path.insert(0, str(config_dir))

    from config import (
        DGLA_DIR as CONFIG_DGLA_DIR,
        OUTPUT_DIR as CONFIG_OUTPUT_DIR,
        SUITE_MANIFEST_DIR as CONFIG_SUITE_MANIFEST_DIR,
        TOOL_VERSION as CONFIG_TOOL_VERSION,
    )
    SUITE_MANIFEST_DIR = Path(CONFIG_SUITE_MANIFEST_DIR)
    DGLA_DIR = Path(CONFIG_DGLA_DIR)
    OUTPUT_DIR = Path(CONFIG_OUTPUT_DIR)
    TOOL_VERSION = CONFIG_TOOL_VERSION
except ImportError:
    SUITE_MANIFEST_DIR = PROJECT_ROOT / "suites"
    DGLA_DIR = PROJECT_ROOT / "dgla"
    OUTPUT_DIR = Path(os.environ.get("KAHLERLAB_OUTPUT_DIR") or PROJECT_ROOT / "reports")
    TOOL_VERSION = "0.0.0"

REPORT_SCHEMA = 1
CSV_COLUMNS = ("index", "value", "cluster", "residual", "kind")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2
