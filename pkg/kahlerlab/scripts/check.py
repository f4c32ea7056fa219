"""
Dependency checker for KahlerLab.

Functions to verify that the required Python packages are importable.
"""

import sys
from typing import Dict, Tuple

# module name -> display name
REQUIRED = {
    "yaml": "PyYAML",
    "questionary": "questionary",
    "numpy": "numpy",
    "scipy": "scipy",
}
OPTIONAL = {
    "matplotlib": "matplotlib",
}


def _importable(modules: Dict[str, str]) -> Dict[str, bool]:
    status = {}
    for module, display in modules.items():
        try:
            __import__(module)
            status[display] = True
        except ImportError:
            status[display] = False
    return status


def check_python_dependencies() -> Dict[str, bool]:
    """Check required Python packages."""
    return _importable(REQUIRED)


def check_optional_dependencies() -> Dict[str, bool]:
    """Check packages only some outputs need (SVG plots)."""
    return _importable(OPTIONAL)


def check_all_dependencies() -> Tuple[bool, Dict[str, Dict[str, bool]]]:
    """Check all dependencies and return status and details."""
    deps = {
        "python": check_python_dependencies(),
        "optional": check_optional_dependencies(),
    }
    return all(deps["python"].values()), deps


def print_dependency_status() -> bool:
    """Print dependency status in a clean format."""
    print("🔍 Checking dependencies...")

    ok, deps = check_all_dependencies()

    print("\n🐍 Python packages:")
    for dep, available in deps["python"].items():
        print(f"   {'✅' if available else '❌'} {dep}")

    print("\n📈 Optional (plots):")
    for dep, available in deps["optional"].items():
        print(f"   {'✅' if available else '⚠️ '} {dep}")

    print(f"\n{'🎉 Ready to go!' if ok else '⚠️  Some dependencies missing'}")
    return ok


def get_installation_instructions() -> str:
    """Return installation instructions for missing dependencies."""
    _, deps = check_all_dependencies()
    missing = [pkg for group in deps.values() for pkg, available in group.items() if not available]
    if not missing:
        return "✅ All dependencies satisfied!"
    return f"📦 Install Python packages: pip install {' '.join(missing)}"


def require_dependencies() -> None:
    """Check dependencies and exit if any required one is missing."""
    ok, _ = check_all_dependencies()
    if not ok:
        print("❌ Missing dependencies!")
        print_dependency_status()
        print("\n📋 To install missing dependencies:")
        for line in get_installation_instructions().split("\n"):
            if line.strip():
                print(f"   {line.strip()}")
        print()
        sys.exit(1)
