"""
Display helpers for KahlerLab.

Detailed view of one suite manifest, including the tasks it expands to.
"""

from core import constants
from core.utils import PREFIX_ERROR
from core.yaml import find_suite_yaml_path, load_suite_yaml_by_filename


def inspect_suite(suite_id: str) -> bool:
    """Show detailed information about a suite. Returns False if it cannot be loaded."""
    try:
        resolved_name, manifest = load_suite_yaml_by_filename(suite_id)
        path = find_suite_yaml_path(suite_id)
    except FileNotFoundError as exc:
        print(f"{PREFIX_ERROR} Suite '{suite_id}' not found: {exc}")
        return False
    except Exception as exc:
        print(f"{PREFIX_ERROR} Failed to load manifest for suite '{suite_id}': {exc}")
        return False

    enabled = manifest.get("enabled") is True
    command = str(manifest.get("command", "?"))
    params = manifest.get("params") or {}

    print(f"🔍 Inspecting suite '{resolved_name}'...")
    print()
    print("📋 Basic Information:")
    print(f"   {'✅ Enabled' if enabled else '❌ Disabled'}")
    print(f"   ⚙️  Command: {command}")
    print(f"   📄 Manifest: {path}")
    aliases = manifest.get("aliases") or []
    if aliases:
        print(f"   🔖 Aliases: {', '.join(str(a) for a in aliases)}")
    if manifest.get("description"):
        print(f"   📝 {manifest['description']}")
    print()

    print("🧮 Parameters:")
    for key, value in params.items():
        if key != "checks":
            print(f"   {key}: {value}")
    print()

    if command == "identities":
        try:
            from core.runconfig import expand_tasks, parse_seeds

            tasks = expand_tasks(params.get("checks") or [])
            seeds = parse_seeds(params.get("seeds"))
            print(f"🧪 Tasks ({len(tasks)} x {len(seeds)} seeds):")
            for task in tasks:
                rendered = ", ".join(f"{k}={v}" for k, v in task["params"].items())
                print(f"   {task['check']}({rendered})")
        except Exception as exc:
            print(f"🧪 Tasks: Error expanding ({exc})")
        print()

    report = constants.OUTPUT_DIR / f"{path.stem}.json"
    print(f"📊 Last report: {report if report.exists() else 'none'}")
    return True
