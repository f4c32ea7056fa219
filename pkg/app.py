#!/usr/bin/env python3
"""
KahlerLab Launcher Script

Runs kahlerlab/app.py in a child interpreter and handles Ctrl+C cleanly.
Relative paths on the command line stay relative to the caller's directory.
"""

import signal
import subprocess
import sys
from pathlib import Path

PREFIX_INFO = "\033[36m[INFO]\033[0m" if sys.stdout.isatty() else "[INFO]"
PREFIX_ERROR = "\033[31m[ERROR]\033[0m" if sys.stdout.isatty() else "[ERROR]"

PROJECT_PATH = Path(__file__).resolve().parent / "kahlerlab"


def main() -> int:
    entry = PROJECT_PATH / "app.py"
    if not entry.exists():
        print(f"{PREFIX_ERROR} Project path not found: {PROJECT_PATH}")
        return 1

    args = sys.argv[1:] if len(sys.argv) > 1 else ["--help"]

    def handle_sigint(sig, frame):
        print(f"\n{PREFIX_INFO} Stopped by user (Ctrl+C)")
        sys.exit(130)

    signal.signal(signal.SIGINT, handle_sigint)
    result = subprocess.run([sys.executable, str(entry)] + args)
    return result.returncode


if __name__ == "__main__":
    sys.exit(main())
