"""
Shared fixtures for the KahlerLab test-suite.

The application modules import each other as top-level packages (core,
scripts, config), so the kahlerlab/ directory goes first on sys.path.
"""

import shutil
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
APP_DIR = ROOT / "kahlerlab"
if str(APP_DIR) not in sys.path:
    sys.path.insert(0, str(APP_DIR))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Reports, CSV files and plots land in a temporary directory."""
    from core import constants

    out = tmp_path / "reports"
    monkeypatch.setattr(constants, "OUTPUT_DIR", out)
    return out


@pytest.fixture
def suite_dir(tmp_path, monkeypatch):
    """A private copy of the shipped suite manifests."""
    from core import constants

    target = tmp_path / "suites"
    shutil.copytree(ROOT / "suites", target)
    monkeypatch.setattr(constants, "SUITE_MANIFEST_DIR", target)
    return target


@pytest.fixture
def no_tty(monkeypatch):
    """Pretend stdin is not a terminal so no overwrite prompt is shown."""
    monkeypatch.setattr(sys.stdin, "isatty", lambda: False, raising=False)
